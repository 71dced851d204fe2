#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rybu/lang/ast.hpp"
#include "rybu/lang/typecheck.hpp"

namespace rybu::lower {

/// A concrete value of a state variable, or the result of a predicate.
struct Value {
  enum class Kind { Int, Atom, Bool, Vector };
  Kind kind = Kind::Int;
  std::int64_t number = 0;
  std::string atom;
  bool truth = false;
  std::vector<Value> elements;

  static Value integer(std::int64_t v);
  static Value make_atom(std::string a);
  static Value boolean(bool b);
  static Value vector(std::vector<Value> elems);

  friend bool operator==(const Value&, const Value&) = default;
};

/// Label fragment: `3`, `m2` for -2, `up`, and `0_3_1_2` for vectors.
std::string render(const Value& v);

/// Human-readable form: `3`, `-2`, `:up`, `[0, 3, 1, 2]`.
std::string display(const Value& v);

/// All values of a type in canonical order: ascending integers, enumeration
/// declaration order, vectors lexicographically (first element slowest).
std::vector<Value> domain(const lang::Type& type);

/// Values of a server's state variables, in declaration order.
struct StateAssignment {
  std::vector<std::pair<std::string, Value>> vars;

  const Value* find(std::string_view name) const;
  Value* find(std::string_view name);
  friend bool operator==(const StateAssignment&, const StateAssignment&) = default;
};

/// `var1_v1_var2_v2...`; `idle` for a server without variables.
std::string state_label(const StateAssignment& a);

/// Evaluates a well-typed expression. Integer arithmetic, comparisons and
/// atom equality; names resolve to state variables first, then constants.
Value eval_expr(const lang::Expr& expr, const StateAssignment& assignment,
                const std::map<std::string, std::int64_t>& consts);

}  // namespace rybu::lower
