#pragma once

#include <utility>
#include <vector>

#include "mlp/term.hpp"

namespace mlp {

/// A term paired with the activation base its variables are relative to.
/// Variable v of a clause instantiated at base b names runtime slot b+v.
struct BTerm {
  TermPtr t;
  int base = 0;
};

/// Mutable binding store with a trail for backtracking. Unification runs
/// with the occurs check on; bindings never form cycles.
class Store {
 public:
  int fresh(int n) {
    int base = (int)slots_.size();
    slots_.resize(slots_.size() + n);
    return base;
  }

  size_t size() const { return slots_.size(); }
  void shrink(size_t n) { slots_.resize(n); }

  bool bound(int slot) const { return slots_[slot].t != nullptr; }

  /// Dereferences variable chains; result is an unbound Var or a non-var term.
  BTerm walk(BTerm bt) const;

  bool unify(BTerm a, BTerm b);

  size_t mark() const { return trail_.size(); }
  void undo(size_t mark);

  /// Deep copy with all bound vars substituted; runtime vars keep their slot
  /// id as the var id.
  TermPtr resolve(BTerm bt) const;

  bool occurs(int slot, BTerm bt) const;

 private:
  void bind(int slot, BTerm value) {
    slots_[slot] = value;
    trail_.push_back(slot);
  }

  std::vector<BTerm> slots_;
  std::vector<int> trail_;
};

}  // namespace mlp
