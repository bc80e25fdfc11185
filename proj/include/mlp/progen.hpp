#pragma once

#include <string>

#include "mlp/rng.hpp"

namespace mlp {

/// Seeded generator of small random programs (a few predicates and clauses
/// over unifications, arithmetic and list builtins, with one entry
/// assertion). Call structure is acyclic except for one structurally
/// terminating list-recursion template, so generated programs terminate.
std::string random_program(uint64_t seed);

}  // namespace mlp
