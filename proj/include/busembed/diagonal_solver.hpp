#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "busembed/core.hpp"

namespace busembed {

// One sorting operation: alpha reads the next input element onto the first
// stack, beta moves the first stack's top to the second, gamma pops the
// second stack's top to the output.
struct Op {
  enum Kind { alpha = 0, beta = 1, gamma = 2 };
  Kind kind;
  int elem;  // 1-based element
  bool operator==(const Op&) const = default;
};

using SortingWord = std::vector<Op>;

inline std::string word_to_string(const SortingWord& w) {
  std::string s;
  for (const Op& op : w) {
    if (!s.empty()) s += ' ';
    s += "abg"[op.kind];
    s += std::to_string(op.elem);
  }
  return s;
}

inline SortingWord word_from_string(const std::string& text) {
  SortingWord w;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    if (i >= text.size()) break;
    char c = text[i++];
    Op::Kind kind;
    if (c == 'a') kind = Op::alpha;
    else if (c == 'b') kind = Op::beta;
    else if (c == 'g') kind = Op::gamma;
    else throw Error("bad word token at position " + std::to_string(i - 1));
    size_t j = i;
    while (j < text.size() && isdigit((unsigned char)text[j])) ++j;
    if (j == i) throw Error("missing subscript at position " + std::to_string(i));
    w.push_back({kind, std::stoi(text.substr(i, j - i))});
    i = j;
  }
  return w;
}

struct WordError : Error {
  size_t position;
  WordError(size_t pos, const std::string& what)
      : Error("word invalid at op " + std::to_string(pos) + ": " + what),
        position(pos) {}
};

inline void check_permutation(const std::vector<int>& pi) {
  std::vector<bool> seen(pi.size(), false);
  for (int v : pi) {
    if (v < 1 || v > (int)pi.size() || seen[v - 1])
      throw std::invalid_argument("not a permutation of 1..k");
    seen[v - 1] = true;
  }
}

// Replays the word against the two-stack machine, throwing on the first
// illegal operation. Requires every operation exactly once per element.
inline void validate_word(const SortingWord& w, const std::vector<int>& pi) {
  check_permutation(pi);
  const int k = (int)pi.size();
  if ((int)w.size() != 3 * k)
    throw WordError(w.size(), "word must have exactly 3k operations");
  std::vector<int> s1, s2;
  size_t next_in = 0;
  std::vector<std::array<int, 3>> used(k + 1, {0, 0, 0});
  for (size_t i = 0; i < w.size(); ++i) {
    const Op& op = w[i];
    if (op.elem < 1 || op.elem > k) throw WordError(i, "subscript out of range");
    if (++used[op.elem][op.kind] > 1) throw WordError(i, "repeated operation");
    switch (op.kind) {
      case Op::alpha:
        if (next_in >= pi.size() || pi[next_in] != op.elem)
          throw WordError(i, "alpha does not read the next input element");
        s1.push_back(pi[next_in++]);
        break;
      case Op::beta:
        if (s1.empty() || s1.back() != op.elem)
          throw WordError(i, "beta does not pop the top of the first stack");
        s2.push_back(s1.back());
        s1.pop_back();
        break;
      case Op::gamma:
        if (s2.empty() || s2.back() != op.elem)
          throw WordError(i, "gamma does not pop the top of the second stack");
        s2.pop_back();
        break;
    }
  }
}

// Output sequence of a complete valid word.
inline std::vector<int> replay_output(const SortingWord& w,
                                      const std::vector<int>& pi) {
  validate_word(w, pi);
  std::vector<int> out;
  for (const Op& op : w)
    if (op.kind == Op::gamma) out.push_back(op.elem);
  return out;
}

// A word is pushall when the merged alpha/gamma subscript sequence equals
// pi followed by the identity, i.e. all pushes precede all outputs.
inline bool is_pushall_word(const SortingWord& w, const std::vector<int>& pi) {
  validate_word(w, pi);
  std::vector<int> seq;
  for (const Op& op : w)
    if (op.kind != Op::beta) seq.push_back(op.elem);
  const int k = (int)pi.size();
  for (int i = 0; i < k; ++i)
    if (seq[i] != pi[i]) return false;
  for (int i = 0; i < k; ++i)
    if (seq[k + i] != i + 1) return false;
  return true;
}

namespace detail {

// Memoized depth-first search for a pushall sorting word; operations are
// tried in lexicographic order (alpha < beta < gamma), so the first word
// found is the lexicographically smallest witness.
class PushallSearch {
 public:
  explicit PushallSearch(const std::vector<int>& pi) : pi_(pi), k_((int)pi.size()) {
    if (k_ > kMaxElems)
      throw Error("pushall_sort supports at most 12 elements");
  }

  std::optional<SortingWord> run() {
    word_.clear();
    s1_.clear();
    s2_.clear();
    in_ = out_ = 0;
    if (dfs()) return word_;
    return std::nullopt;
  }

 private:
  static constexpr int kMaxElems = 12;
  const std::vector<int>& pi_;
  int k_;
  std::vector<int> s1_, s2_;
  int in_ = 0, out_ = 0;
  SortingWord word_;
  std::unordered_set<uint64_t> dead_;

  // The second stack is determined by (consumed, output, first stack): its
  // elements are the complement and a viable second stack is always strictly
  // decreasing bottom-to-top.
  uint64_t key() const {
    uint64_t h = (uint64_t)in_ | ((uint64_t)out_ << 4);
    uint64_t shift = 8;
    for (int v : s1_) {
      h |= (uint64_t)v << shift;
      shift += 4;
    }
    h |= (uint64_t)s1_.size() << 56;
    return h;
  }

  bool dfs() {
    if (out_ == k_) return true;
    uint64_t h = key();
    if (dead_.contains(h)) return false;
    // alpha: read next input
    if (in_ < k_) {
      s1_.push_back(pi_[in_++]);
      word_.push_back({Op::alpha, s1_.back()});
      if (dfs()) return true;
      word_.pop_back();
      s1_.pop_back();
      --in_;
    }
    // beta: only onto a smaller-topped second stack, otherwise the output
    // can never come out sorted
    if (!s1_.empty() && (s2_.empty() || s2_.back() > s1_.back())) {
      int v = s1_.back();
      s1_.pop_back();
      s2_.push_back(v);
      word_.push_back({Op::beta, v});
      if (dfs()) return true;
      word_.pop_back();
      s2_.pop_back();
      s1_.push_back(v);
    }
    // gamma: pushall words output only after the whole input was pushed
    if (in_ == k_ && !s2_.empty() && s2_.back() == out_ + 1) {
      int v = s2_.back();
      s2_.pop_back();
      ++out_;
      word_.push_back({Op::gamma, v});
      if (dfs()) return true;
      word_.pop_back();
      --out_;
      s2_.push_back(v);
    }
    dead_.insert(h);
    return false;
  }
};

}  // namespace detail

struct PushallResult {
  bool sortable = false;
  SortingWord word;
};

// Decides 2-stack pushall sortability by exhaustive memoized search and
// returns the lexicographically smallest sorting word.
inline PushallResult pushall_sort(const std::vector<int>& pi) {
  check_permutation(pi);
  detail::PushallSearch search(pi);
  PushallResult res;
  if (auto w = search.run()) {
    res.sortable = true;
    res.word = std::move(*w);
  }
  return res;
}

// Canonical separable diagonal instance of a permutation: first appearances
// along the diagonal in pi order, then second appearances in identity order.
inline ColoredPointSet materialize_diagonal(const std::vector<int>& pi) {
  check_permutation(pi);
  InstanceBuilder b;
  const int k = (int)pi.size();
  for (int j = 0; j < k; ++j)
    b.add(Rat(j + 1), Rat(j + 1), std::to_string(pi[j]));
  for (int j = 0; j < k; ++j)
    b.add(Rat(k + j + 1), Rat(k + j + 1), std::to_string(j + 1));
  return b.build();
}

struct DiagonalDrawing {
  ColoredPointSet instance;
  BusLayout layout;
};

// Materializes a valid pushall word as a drawing: the 3k operations take
// consecutive slots on the diagonal; alpha places the left point, beta the
// bus crossing, gamma the right point.
inline DiagonalDrawing word_to_layout(const SortingWord& w,
                                      const std::vector<int>& pi) {
  validate_word(w, pi);
  InstanceBuilder b;
  std::vector<std::pair<int, int>> bus_slot;  // (elem, slot)
  for (size_t i = 0; i < w.size(); ++i) {
    int slot = (int)i + 1;
    if (w[i].kind == Op::beta)
      bus_slot.emplace_back(w[i].elem, slot);
    else
      b.add(Rat(slot), Rat(slot), std::to_string(w[i].elem));
  }
  DiagonalDrawing d{b.build(), {}};
  d.layout.bus_y.assign(d.instance.k(), Rat(0));
  for (auto [elem, slot] : bus_slot) {
    for (int c = 0; c < d.instance.k(); ++c)
      if (d.instance.color_names[c] == std::to_string(elem))
        d.layout.bus_y[c] = Rat(slot);
  }
  return d;
}

struct DiagonalWord {
  SortingWord word;
  std::vector<int> pi;
};

// Reads a planar center-bus drawing of a diagonal instance back into a
// sorting word by walking the diagonal bottom to top.
inline DiagonalWord layout_to_word(const ColoredPointSet& inst,
                                   const BusLayout& layout) {
  const int k = inst.k();
  if ((int)layout.bus_y.size() != k)
    throw Error("layout does not cover every color");
  std::vector<std::vector<int>> pts_of(k);
  for (int i = 0; i < inst.n(); ++i) pts_of[inst.points[i].color].push_back(i);
  for (auto& v : pts_of) {
    if (v.size() != 2)
      throw Error("diagonal instances need exactly two points per color");
    if (inst.points[v[0]].y > inst.points[v[1]].y) std::swap(v[0], v[1]);
  }
  // colors are numbered by the diagonal order of their second appearance
  std::vector<int> colors(k);
  for (int c = 0; c < k; ++c) colors[c] = c;
  std::sort(colors.begin(), colors.end(), [&](int a, int b) {
    return inst.points[pts_of[a][1]].y < inst.points[pts_of[b][1]].y;
  });
  std::vector<int> number(k);
  for (int i = 0; i < k; ++i) number[colors[i]] = i + 1;

  struct Event {
    Rat y;
    Op op;
  };
  std::vector<Event> ev;
  for (int c = 0; c < k; ++c) {
    ev.push_back({inst.points[pts_of[c][0]].y, {Op::alpha, number[c]}});
    ev.push_back({inst.points[pts_of[c][1]].y, {Op::gamma, number[c]}});
    ev.push_back({layout.bus_y[c], {Op::beta, number[c]}});
  }
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) {
    return a.y < b.y;
  });
  for (size_t i = 1; i < ev.size(); ++i)
    if (ev[i].y == ev[i - 1].y)
      throw Error("degenerate drawing: coinciding diagonal positions");

  DiagonalWord out;
  for (const Event& e : ev) out.word.push_back(e.op);
  std::vector<int> first_seen;
  for (const Event& e : ev)
    if (e.op.kind == Op::alpha) first_seen.push_back(e.op.elem);
  out.pi = std::move(first_seen);
  validate_word(out.word, out.pi);  // rejects non-planar inputs
  return out;
}

struct DiagonalSolveResult {
  bool feasible = false;
  SortingWord word;
  std::optional<DiagonalDrawing> drawing;
};

inline DiagonalSolveResult solve_diagonal(const std::vector<int>& pi) {
  DiagonalSolveResult res;
  auto sorted = pushall_sort(pi);
  if (!sorted.sortable) return res;
  res.feasible = true;
  res.word = sorted.word;
  res.drawing = word_to_layout(sorted.word, pi);
  return res;
}

}  // namespace busembed
