#pragma once

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "busembed/core.hpp"
#include "busembed/rational.hpp"

namespace busembed {

// JSON value tree with exact rational numbers. Parsed through the SAX
// interface so the raw decimal token is kept; 0.1 in a file is exactly 1/10
// here, never a binary double.
struct ExactJson {
  enum class Type { null, boolean, number, string, array, object };
  Type type = Type::null;
  bool b = false;
  Rat num;
  std::string str;
  std::vector<ExactJson> arr;
  std::vector<std::pair<std::string, ExactJson>> obj;

  bool is_object() const { return type == Type::object; }
  bool is_array() const { return type == Type::array; }

  const ExactJson* find(const std::string& key) const {
    if (type != Type::object) return nullptr;
    for (const auto& [k, v] : obj)
      if (k == key) return &v;
    return nullptr;
  }
  const ExactJson& at(const std::string& key) const {
    const ExactJson* p = find(key);
    if (!p) throw Error("json: missing key \"" + key + "\"");
    return *p;
  }
  Rat as_number() const {
    if (type == Type::number) return num;
    if (type == Type::string) return Rat::parse(str);  // "p/q" extension
    throw Error("json: expected a number");
  }
  const std::string& as_string() const {
    if (type != Type::string) throw Error("json: expected a string");
    return str;
  }
};

namespace detail {

class ExactSax : public nlohmann::json_sax<nlohmann::json> {
 public:
  ExactJson root;

  bool null() override { return put(ExactJson{}); }
  bool boolean(bool v) override {
    ExactJson j; j.type = ExactJson::Type::boolean; j.b = v; return put(std::move(j));
  }
  bool number_integer(number_integer_t v) override {
    ExactJson j; j.type = ExactJson::Type::number; j.num = Rat((long long)v);
    return put(std::move(j));
  }
  bool number_unsigned(number_unsigned_t v) override {
    if (v > (number_unsigned_t)INT64_MAX) return false;
    ExactJson j; j.type = ExactJson::Type::number; j.num = Rat((long long)v);
    return put(std::move(j));
  }
  bool number_float(number_float_t, const string_t& raw) override {
    ExactJson j; j.type = ExactJson::Type::number; j.num = Rat::parse(raw);
    return put(std::move(j));
  }
  bool string(string_t& v) override {
    ExactJson j; j.type = ExactJson::Type::string; j.str = v; return put(std::move(j));
  }
  bool binary(binary_t&) override { return false; }
  bool start_object(std::size_t) override {
    stack_.push_back(Frame{true, {}});
    return true;
  }
  bool key(string_t& k) override { stack_.back().key = k; return true; }
  bool end_object() override { return pop(ExactJson::Type::object); }
  bool start_array(std::size_t) override {
    stack_.push_back(Frame{false, {}});
    return true;
  }
  bool end_array() override { return pop(ExactJson::Type::array); }
  bool parse_error(std::size_t position, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    throw Error("json parse error at byte " + std::to_string(position) + ": " +
                ex.what());
  }

 private:
  struct Frame {
    bool is_object;
    std::string key;
    ExactJson value;
    Frame(bool o, ExactJson v) : is_object(o), value(std::move(v)) {
      value.type = o ? ExactJson::Type::object : ExactJson::Type::array;
    }
  };
  std::vector<Frame> stack_;

  bool put(ExactJson v) {
    if (stack_.empty()) { root = std::move(v); return true; }
    Frame& f = stack_.back();
    if (f.is_object)
      f.value.obj.emplace_back(std::move(f.key), std::move(v));
    else
      f.value.arr.push_back(std::move(v));
    return true;
  }
  bool pop(ExactJson::Type) {
    ExactJson v = std::move(stack_.back().value);
    stack_.pop_back();
    return put(std::move(v));
  }
};

inline void escape_to(std::string& out, const std::string& s) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if ((unsigned char)c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

// Rationals with a finite decimal expansion are emitted as JSON numbers,
// anything else as a "p/q" string (accepted back by ExactJson::as_number).
inline void number_to(std::string& out, const Rat& v) {
  if (v.decimal_exact()) out += v.str();
  else escape_to(out, v.str());
}

}  // namespace detail

inline ExactJson parse_exact_json(const std::string& text) {
  detail::ExactSax sax;
  nlohmann::json::sax_parse(text, &sax);
  return std::move(sax.root);
}

// Instance interchange format:
//   {"points":[{"x":num,"y":num,"color":"str"}], "epsilon":num}
inline ColoredPointSet instance_from_json(const ExactJson& j) {
  if (!j.is_object()) throw Error("instance json: expected an object");
  InstanceBuilder b;
  const ExactJson& pts = j.at("points");
  if (!pts.is_array()) throw Error("instance json: \"points\" must be an array");
  for (const ExactJson& p : pts.arr)
    b.add(p.at("x").as_number(), p.at("y").as_number(),
          p.at("color").as_string());
  if (const ExactJson* e = j.find("epsilon")) {
    b.inst.epsilon = e->as_number();
    if (b.inst.epsilon < Rat(0)) throw Error("instance json: epsilon < 0");
  }
  return b.build();
}

inline ColoredPointSet instance_from_json_text(const std::string& text) {
  return instance_from_json(parse_exact_json(text));
}

inline std::string instance_to_json(const ColoredPointSet& inst) {
  std::string out = "{\n  \"points\": [\n";
  for (int i = 0; i < inst.n(); ++i) {
    const Point& p = inst.points[i];
    out += "    {\"x\": ";
    detail::number_to(out, p.x);
    out += ", \"y\": ";
    detail::number_to(out, p.y);
    out += ", \"color\": ";
    detail::escape_to(out, inst.color_names[p.color]);
    out += i + 1 < inst.n() ? "},\n" : "}\n";
  }
  out += "  ],\n  \"epsilon\": ";
  detail::number_to(out, inst.epsilon);
  out += "\n}\n";
  return out;
}

// Layout interchange format: {"buses":{"color":y}}
inline BusLayout layout_from_json(const ExactJson& j,
                                  const ColoredPointSet& inst) {
  const ExactJson& buses = j.at("buses");
  if (!buses.is_object()) throw Error("layout json: \"buses\" must be an object");
  BusLayout layout;
  layout.bus_y.resize(inst.k());
  std::vector<bool> seen(inst.k(), false);
  for (const auto& [name, y] : buses.obj) {
    int c = -1;
    for (int i = 0; i < inst.k(); ++i)
      if (inst.color_names[i] == name) { c = i; break; }
    if (c < 0) throw Error("layout json: unknown color \"" + name + "\"");
    layout.bus_y[c] = y.as_number();
    seen[c] = true;
  }
  for (int c = 0; c < inst.k(); ++c)
    if (!seen[c])
      throw Error("layout json: missing bus for color \"" +
                  inst.color_names[c] + "\"");
  return layout;
}

inline std::string layout_to_json(const ColoredPointSet& inst,
                                  const BusLayout& layout) {
  std::string out = "{\n  \"buses\": {\n";
  for (int c = 0; c < inst.k(); ++c) {
    out += "    ";
    detail::escape_to(out, inst.color_names[c]);
    out += ": ";
    detail::number_to(out, layout.bus_y[c]);
    out += c + 1 < inst.k() ? ",\n" : "\n";
  }
  out += "  }\n}\n";
  return out;
}

}  // namespace busembed
