#include "mlp/store.hpp"

namespace mlp {

BTerm Store::walk(BTerm bt) const {
  while (bt.t->is_var()) {
    int slot = bt.base + bt.t->var;
    if (!slots_[slot].t) return {bt.t, bt.base};
    bt = slots_[slot];
  }
  return bt;
}

bool Store::occurs(int slot, BTerm bt) const {
  bt = walk(bt);
  if (bt.t->is_var()) return bt.base + bt.t->var == slot;
  if (bt.t->is_comp())
    for (auto& a : bt.t->args)
      if (occurs(slot, {a, bt.base})) return true;
  return false;
}

bool Store::unify(BTerm a, BTerm b) {
  a = walk(a);
  b = walk(b);
  if (a.t->is_var() && b.t->is_var()) {
    int sa = a.base + a.t->var, sb = b.base + b.t->var;
    if (sa == sb) return true;
    bind(sa, b);
    return true;
  }
  if (a.t->is_var()) {
    int sa = a.base + a.t->var;
    if (occurs(sa, b)) return false;
    bind(sa, b);
    return true;
  }
  if (b.t->is_var()) {
    int sb = b.base + b.t->var;
    if (occurs(sb, a)) return false;
    bind(sb, a);
    return true;
  }
  if (a.t->kind != b.t->kind) return false;
  switch (a.t->kind) {
    case TermKind::Atom: return a.t->name == b.t->name;
    case TermKind::Num: return a.t->num == b.t->num;
    case TermKind::Comp: {
      if (a.t->name != b.t->name || a.t->args.size() != b.t->args.size()) return false;
      for (size_t i = 0; i < a.t->args.size(); ++i)
        if (!unify({a.t->args[i], a.base}, {b.t->args[i], b.base})) return false;
      return true;
    }
    default: return false;
  }
}

void Store::undo(size_t mark) {
  while (trail_.size() > mark) {
    slots_[trail_.back()] = BTerm{};
    trail_.pop_back();
  }
}

TermPtr Store::resolve(BTerm bt) const {
  bt = walk(bt);
  if (bt.t->is_var()) {
    int slot = bt.base + bt.t->var;
    return Term::mk_var(slot, "_" + std::to_string(slot));
  }
  if (bt.t->is_comp()) {
    std::vector<TermPtr> args;
    args.reserve(bt.t->args.size());
    for (auto& a : bt.t->args) args.push_back(resolve({a, bt.base}));
    return Term::mk_comp(bt.t->name, std::move(args));
  }
  return bt.t;
}

}  // namespace mlp
