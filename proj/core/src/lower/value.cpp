#include "rybu/lower/value.hpp"

#include <algorithm>

namespace rybu::lower {

Value Value::integer(std::int64_t v) {
  Value out;
  out.kind = Kind::Int;
  out.number = v;
  return out;
}

Value Value::make_atom(std::string a) {
  Value out;
  out.kind = Kind::Atom;
  out.atom = std::move(a);
  return out;
}

Value Value::boolean(bool b) {
  Value out;
  out.kind = Kind::Bool;
  out.truth = b;
  return out;
}

Value Value::vector(std::vector<Value> elems) {
  Value out;
  out.kind = Kind::Vector;
  out.elements = std::move(elems);
  return out;
}

std::string render(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Int: return v.number < 0 ? "m" + std::to_string(-v.number) : std::to_string(v.number);
    case Value::Kind::Atom: return v.atom;
    case Value::Kind::Bool: return v.truth ? "true" : "false";
    case Value::Kind::Vector: {
      std::string out;
      for (std::size_t i = 0; i < v.elements.size(); ++i) out += (i ? "_" : "") + render(v.elements[i]);
      return out;
    }
  }
  return {};
}

std::string display(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Int: return std::to_string(v.number);
    case Value::Kind::Atom: return ":" + v.atom;
    case Value::Kind::Bool: return v.truth ? "true" : "false";
    case Value::Kind::Vector: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.elements.size(); ++i) out += (i ? ", " : "") + display(v.elements[i]);
      return out + "]";
    }
  }
  return {};
}

std::vector<Value> domain(const lang::Type& type) {
  std::vector<Value> out;
  switch (type.kind) {
    case lang::Type::Kind::Int:
      for (std::int64_t v = type.min; v <= type.max; ++v) out.push_back(Value::integer(v));
      break;
    case lang::Type::Kind::Enum:
      for (const std::string& a : type.atoms) out.push_back(Value::make_atom(a));
      break;
    case lang::Type::Kind::Vector: {
      const std::vector<Value> elem = domain(*type.element);
      std::vector<std::size_t> digits(static_cast<std::size_t>(type.length), 0);
      if (elem.empty()) break;
      for (;;) {
        std::vector<Value> v;
        for (std::size_t d : digits) v.push_back(elem[d]);
        out.push_back(Value::vector(std::move(v)));
        std::size_t k = digits.size();
        while (k > 0 && ++digits[k - 1] == elem.size()) digits[--k] = 0;
        if (k == 0) break;
      }
      break;
    }
  }
  return out;
}

const Value* StateAssignment::find(std::string_view name) const {
  auto it = std::find_if(vars.begin(), vars.end(), [&](const auto& p) { return p.first == name; });
  return it == vars.end() ? nullptr : &it->second;
}

Value* StateAssignment::find(std::string_view name) {
  auto it = std::find_if(vars.begin(), vars.end(), [&](const auto& p) { return p.first == name; });
  return it == vars.end() ? nullptr : &it->second;
}

std::string state_label(const StateAssignment& a) {
  if (a.vars.empty()) return "idle";
  std::string out;
  for (const auto& [name, value] : a.vars) {
    if (!out.empty()) out += "_";
    out += name + "_" + render(value);
  }
  return out;
}

}  // namespace rybu::lower
