#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlp/term.hpp"

namespace mlp {

/// One call-pattern -> success-pattern row of a builtin's transfer
/// description. Properties are terms over Var 0..arity-1 (the argument
/// positions).
struct BuiltinEntry {
  std::vector<TermPtr> calls;
  std::vector<TermPtr> success;
};

struct BuiltinDesc {
  std::string name;
  int arity;
  bool always_fails = false;
  std::vector<int> binds;  // argument positions the builtin may instantiate
  std::vector<BuiltinEntry> entries;
};

/// Transfer description for a builtin, or nullptr if the builtin has none
/// (=/2 goes through abstract unification; true/0 is the identity).
/// Honors the seeded faults that corrupt the table.
const BuiltinDesc* builtin_transfer_desc(const std::string& name, int arity);

}  // namespace mlp
