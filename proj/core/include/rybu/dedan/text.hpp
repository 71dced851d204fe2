#pragma once

#include <string>
#include <string_view>

#include "rybu/dedan/ast.hpp"
#include "rybu/imds/model.hpp"

namespace rybu::dedan {

/// Renders `unit` as Dedan input text. Throws DedanError naming the first
/// identifier in an action template that is not bound by a formal parameter,
/// the type's own name, a declared state/service or a repeater.
std::string print_dedan(const DedanUnit& unit);

/// Parses Dedan text and checks it: formal/actual arity, instance types,
/// template bindings and that every server instance is initialized exactly
/// once. Errors carry the line and column of the offending token when known.
DedanUnit parse_dedan(std::string_view text);

/// The semantic checks performed by parse_dedan, on an already built unit.
void check_unit(const DedanUnit& unit);

/// Expands repeaters and binds formal parameters to actuals, producing a
/// flat model. Servers and agents keep their declaration order; vector
/// elements are named `name[i]`.
imds::SystemModel expand(const DedanUnit& unit);

}  // namespace rybu::dedan
