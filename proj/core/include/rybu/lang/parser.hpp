#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rybu/lang/ast.hpp"
#include "rybu/lang/lexer.hpp"

namespace rybu::lang {

/// Recursive-descent parser over a token stream. Throws SyntaxError with the
/// position of the offending token and the token that was expected.
RybuProgram parse_program(const std::vector<Token>& tokens);

/// tokenize + parse_program.
RybuProgram parse_program(std::string_view source);

/// Canonical source text; parse_program(print_program(p)) == p.
std::string print_program(const RybuProgram& program);
std::string print_expr(const Expr& expr);

}  // namespace rybu::lang
