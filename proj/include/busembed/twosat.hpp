#pragma once

#include <string>
#include <vector>

#include "busembed/core.hpp"

namespace busembed {

// 2-SAT formula over variables 0..num_vars-1. Literal encoding: 2*v for the
// positive literal, 2*v+1 for its negation.
struct TwoSatFormula {
  int num_vars = 0;
  std::vector<std::pair<int, int>> clauses;

  explicit TwoSatFormula(int vars = 0) : num_vars(vars) {}
  static int pos(int v) { return 2 * v; }
  static int neg(int v) { return 2 * v + 1; }
  static int negate(int lit) { return lit ^ 1; }

  void add_clause(int a, int b) {
    check(a);
    check(b);
    clauses.emplace_back(a, b);
  }
  void add_unit(int lit) { add_clause(lit, lit); }

  std::string to_dimacs() const {
    std::string out = "p cnf " + std::to_string(num_vars) + " " +
                      std::to_string(clauses.size()) + "\n";
    auto lit_str = [](int l) {
      int v = l / 2 + 1;
      return std::to_string(l % 2 ? -v : v);
    };
    for (auto [a, b] : clauses) {
      if (a == b)
        out += lit_str(a) + " 0\n";
      else
        out += lit_str(a) + " " + lit_str(b) + " 0\n";
    }
    return out;
  }

 private:
  void check(int lit) const {
    if (lit < 0 || lit >= 2 * num_vars)
      throw Error("2-sat: literal out of range");
  }
};

struct TwoSatResult {
  bool satisfiable = false;
  std::vector<bool> assignment;
  // certificate on unsat: a variable in one component with its negation
  int conflict_var = -1;
};

// Aspvall-Plass-Tarjan: strongly connected components of the implication
// graph, iterative so million-clause formulas do not exhaust the stack.
inline TwoSatResult solve_2sat(const TwoSatFormula& f) {
  const int nodes = 2 * f.num_vars;
  std::vector<int> head(nodes + 1, 0);
  for (auto [a, b] : f.clauses) {
    ++head[TwoSatFormula::negate(a) + 1];
    if (a != b) ++head[TwoSatFormula::negate(b) + 1];
  }
  for (int i = 0; i < nodes; ++i) head[i + 1] += head[i];
  std::vector<int> edge(head[nodes]);
  {
    std::vector<int> fill(head.begin(), head.end() - 1);
    for (auto [a, b] : f.clauses) {
      edge[fill[TwoSatFormula::negate(a)]++] = b;
      if (a != b) edge[fill[TwoSatFormula::negate(b)]++] = a;
    }
  }

  std::vector<int> index(nodes, -1), low(nodes, 0), comp(nodes, -1);
  std::vector<bool> on_stack(nodes, false);
  std::vector<int> stack;
  int next_index = 0, next_comp = 0;

  // explicit DFS frames: (node, next edge offset)
  std::vector<std::pair<int, int>> frames;
  for (int start = 0; start < nodes; ++start) {
    if (index[start] != -1) continue;
    frames.emplace_back(start, head[start]);
    index[start] = low[start] = next_index++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!frames.empty()) {
      auto& [v, ei] = frames.back();
      if (ei < head[v + 1]) {
        int w = edge[ei++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, head[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        if (low[v] == index[v]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = next_comp;
            if (w == v) break;
          }
          ++next_comp;
        }
        int child = v;
        frames.pop_back();
        if (!frames.empty()) {
          int parent = frames.back().first;
          low[parent] = std::min(low[parent], low[child]);
        }
      }
    }
  }

  TwoSatResult res;
  res.assignment.assign(f.num_vars, false);
  for (int v = 0; v < f.num_vars; ++v) {
    if (comp[2 * v] == comp[2 * v + 1]) {
      res.satisfiable = false;
      res.conflict_var = v;
      return res;
    }
    // components are numbered in completion order (reverse topological);
    // a literal is true when its component sits later in topological order
    res.assignment[v] = comp[2 * v] < comp[2 * v + 1];
  }
  res.satisfiable = true;
  return res;
}

}  // namespace busembed
