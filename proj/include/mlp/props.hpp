#pragma once

#include <stdexcept>

#include "mlp/store.hpp"

namespace mlp {

struct UnrunnableProperty : std::runtime_error {
  std::string prop;
  explicit UnrunnableProperty(const std::string& p)
      : std::runtime_error("property without run-time implementation: " + p), prop(p) {}
};

/// True if name/arity has a run-time implementation (fault injection can
/// unregister clique/1 and instance/2).
bool property_runnable(const std::string& name, int arity);

/// True if name/arity is a property of the assertion language at all,
/// regardless of run-time availability.
bool property_known(const std::string& name, int arity);

/// Evaluates a check conjunction against the current bindings. Purely
/// observational: the store is never modified. Returns nullptr on pass, the
/// leftmost failing conjunct otherwise. Throws UnrunnableProperty.
///
/// mshare/1 is evaluated relative to the conjunction it appears in: its
/// ambient variable set is every variable of the conjunction except those
/// covered by clique/1 conjuncts, and a sharing group is also admissible when
/// some clique covers it.
TermPtr eval_check(const std::vector<TermPtr>& conj, int base, const Store& store);

/// Property evaluation on a fully resolved term (no store access). Used by
/// eval_check and by the test-case generators.
bool eval_resolved_prop(const std::string& name, const std::vector<TermPtr>& args);

}  // namespace mlp
