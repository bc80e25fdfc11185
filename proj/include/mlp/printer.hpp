#pragma once

#include <string>

#include "mlp/ast.hpp"

namespace mlp {

/// Renders a Program in the concrete directive syntax; output reparses to an
/// alpha-equivalent Program.
std::string print_program(const Program& prog);

std::string print_assertion(const Assertion& a);
std::string print_clause(const Clause& c);

}  // namespace mlp
