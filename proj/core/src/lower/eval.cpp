#include <stdexcept>

#include "rybu/lower/value.hpp"

namespace rybu::lower {

namespace {

std::int64_t as_int(const Value& v) {
  if (v.kind != Value::Kind::Int) throw std::logic_error("integer operand expected");
  return v.number;
}

}  // namespace

Value eval_expr(const lang::Expr& e, const StateAssignment& a, const std::map<std::string, std::int64_t>& consts) {
  using K = lang::Expr::Kind;
  switch (e.kind) {
    case K::Int: return Value::integer(e.value);
    case K::Atom: return Value::make_atom(e.name);
    case K::Name: {
      if (const Value* v = a.find(e.name)) return *v;
      auto it = consts.find(e.name);
      if (it == consts.end()) throw std::logic_error("unbound name '" + e.name + "'");
      return Value::integer(it->second);
    }
    case K::Index: {
      const Value* v = a.find(e.name);
      if (!v || v->kind != Value::Kind::Vector) throw std::logic_error("'" + e.name + "' is not a vector");
      std::int64_t i = as_int(eval_expr(*e.args[0], a, consts));
      return v->elements.at(static_cast<std::size_t>(i));
    }
    case K::Negate: return Value::integer(-as_int(eval_expr(*e.args[0], a, consts)));
    case K::Binary: {
      Value l = eval_expr(*e.args[0], a, consts);
      Value r = eval_expr(*e.args[1], a, consts);
      switch (e.op) {
        case lang::BinaryOp::Add: return Value::integer(as_int(l) + as_int(r));
        case lang::BinaryOp::Sub: return Value::integer(as_int(l) - as_int(r));
        case lang::BinaryOp::Eq: return Value::boolean(l == r);
        case lang::BinaryOp::Ne: return Value::boolean(!(l == r));
        case lang::BinaryOp::Lt: return Value::boolean(as_int(l) < as_int(r));
        case lang::BinaryOp::Gt: return Value::boolean(as_int(l) > as_int(r));
        case lang::BinaryOp::Le: return Value::boolean(as_int(l) <= as_int(r));
        case lang::BinaryOp::Ge: return Value::boolean(as_int(l) >= as_int(r));
      }
      break;
    }
    case K::Vector: {
      std::vector<Value> elems;
      for (const auto& arg : e.args) elems.push_back(eval_expr(*arg, a, consts));
      return Value::vector(std::move(elems));
    }
  }
  throw std::logic_error("unhandled expression");
}

}  // namespace rybu::lower
