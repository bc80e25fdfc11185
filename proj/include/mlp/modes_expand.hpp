#pragma once

#include <stdexcept>

#include "mlp/ast.hpp"

namespace mlp {

struct UnknownMode : std::runtime_error {
  explicit UnknownMode(const std::string& name)
      : std::runtime_error("unknown mode '" + name + "'") {}
};

/// Built-in mode macros: +(A), -(A), ?(A), +(A,P), -(A,P).
std::vector<ModeDef> builtin_modedefs();

/// Rewrites mode macros in assertion heads into calls/success property
/// conjuncts over fresh argument variables. Idempotent.
Program expand_modes(const Program& prog);

}  // namespace mlp
