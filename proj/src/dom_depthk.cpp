#include <algorithm>
#include <functional>
#include <map>

#include "mlp/builtin_table.hpp"
#include "mlp/domain.hpp"
#include "mlp/faults.hpp"

namespace mlp {

namespace {

// Term-structure patterns truncated at depth k: Top | Atom | Num | Comp.
struct Pat;
using PatPtr = std::shared_ptr<const Pat>;

struct Pat {
  enum class K { Top, Atom, Num, Comp };
  K k = K::Top;
  std::string name;
  long long num = 0;
  std::vector<PatPtr> args;

  static PatPtr top() {
    static PatPtr t = std::make_shared<Pat>();
    return t;
  }
  static PatPtr atom(std::string n) {
    auto p = std::make_shared<Pat>();
    p->k = K::Atom;
    p->name = std::move(n);
    return p;
  }
  static PatPtr number(long long v) {
    auto p = std::make_shared<Pat>();
    p->k = K::Num;
    p->num = v;
    return p;
  }
  static PatPtr comp(std::string n, std::vector<PatPtr> as) {
    auto p = std::make_shared<Pat>();
    p->k = K::Comp;
    p->name = std::move(n);
    p->args = std::move(as);
    return p;
  }
};

bool pat_eq(const PatPtr& a, const PatPtr& b) {
  if (a->k != b->k) return false;
  switch (a->k) {
    case Pat::K::Top: return true;
    case Pat::K::Atom: return a->name == b->name;
    case Pat::K::Num: return a->num == b->num;
    case Pat::K::Comp:
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!pat_eq(a->args[i], b->args[i])) return false;
      return true;
  }
  return false;
}

// instance order: a <= b iff every term matching a matches b
bool pat_le(const PatPtr& a, const PatPtr& b) {
  if (b->k == Pat::K::Top) return true;
  if (a->k != b->k) return false;
  switch (a->k) {
    case Pat::K::Atom: return a->name == b->name;
    case Pat::K::Num: return a->num == b->num;
    case Pat::K::Comp:
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!pat_le(a->args[i], b->args[i])) return false;
      return true;
    default: return false;
  }
}

PatPtr pat_lub(const PatPtr& a, const PatPtr& b) {
  if (a->k == Pat::K::Top || b->k == Pat::K::Top) return Pat::top();
  if (a->k != b->k) return Pat::top();
  switch (a->k) {
    case Pat::K::Atom: return a->name == b->name ? a : Pat::top();
    case Pat::K::Num: return a->num == b->num ? a : Pat::top();
    case Pat::K::Comp: {
      if (a->name != b->name || a->args.size() != b->args.size()) return Pat::top();
      std::vector<PatPtr> args;
      for (size_t i = 0; i < a->args.size(); ++i) args.push_back(pat_lub(a->args[i], b->args[i]));
      return Pat::comp(a->name, std::move(args));
    }
    default: return Pat::top();
  }
}

// meet by pattern unification; nullptr = bottom
PatPtr pat_glb(const PatPtr& a, const PatPtr& b) {
  if (a->k == Pat::K::Top) return b;
  if (b->k == Pat::K::Top) {
    // seeded defect: the symmetric top case was forgotten and falls through
    // to the clash branch
    if (faults::enabled(faults::Fault::DepthkGlbNotGreatest)) return nullptr;
    return a;
  }
  if (a->k != b->k) return nullptr;
  switch (a->k) {
    case Pat::K::Atom: return a->name == b->name ? a : nullptr;
    case Pat::K::Num: return a->num == b->num ? a : nullptr;
    case Pat::K::Comp: {
      if (a->name != b->name || a->args.size() != b->args.size()) return nullptr;
      std::vector<PatPtr> args;
      for (size_t i = 0; i < a->args.size(); ++i) {
        PatPtr m = pat_glb(a->args[i], b->args[i]);
        if (!m) return nullptr;
        args.push_back(m);
      }
      return Pat::comp(a->name, std::move(args));
    }
    default: return nullptr;
  }
}

PatPtr truncate(const PatPtr& p, int depth_left) {
  if (p->k != Pat::K::Comp) return p;
  if (depth_left <= 0) return Pat::top();
  std::vector<PatPtr> args;
  for (auto& a : p->args) args.push_back(truncate(a, depth_left - 1));
  return Pat::comp(p->name, std::move(args));
}

std::string pat_str(const PatPtr& p) {
  switch (p->k) {
    case Pat::K::Top: return "?";
    case Pat::K::Atom: return p->name;
    case Pat::K::Num: return std::to_string(p->num);
    case Pat::K::Comp: {
      std::string s = p->name + "(";
      for (size_t i = 0; i < p->args.size(); ++i) {
        if (i) s += ",";
        s += pat_str(p->args[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

struct DkAsub : Asub {
  bool bot = false;
  int k = 2;
  std::vector<PatPtr> pats;
  std::string to_string() const override {
    if (bot) return "bottom";
    std::string s = "{";
    for (size_t i = 0; i < pats.size(); ++i) {
      if (i) s += ",";
      s += pat_str(pats[i]);
    }
    return s + "}";
  }
};

const DkAsub& cast(const Asub& a) { return static_cast<const DkAsub&>(a); }

class DepthKDomain : public Domain {
 public:
  explicit DepthKDomain(int k) : k_(k) {}
  std::string name() const override { return "depthk"; }

  AsubPtr mk(std::vector<PatPtr> pats) const {
    auto a = std::make_shared<DkAsub>();
    a->k = k_;
    a->pats = std::move(pats);
    return a;
  }
  AsubPtr mk_bot(int n) const {
    auto a = std::make_shared<DkAsub>();
    a->k = k_;
    a->bot = true;
    a->pats.assign(n, Pat::top());
    return a;
  }

  AsubPtr bottom(int n) const override { return mk_bot(n); }
  AsubPtr top(int n) const override { return mk(std::vector<PatPtr>(n, Pat::top())); }
  AsubPtr fresh(int n) const override { return top(n); }
  int num_vars(const Asub& a) const override { return (int)cast(a).pats.size(); }
  bool is_bottom(const Asub& a) const override { return cast(a).bot; }

  bool leq(const Asub& a, const Asub& b) const override {
    const auto& x = cast(a);
    const auto& y = cast(b);
    if (x.bot) return true;
    if (y.bot) return false;
    for (size_t i = 0; i < x.pats.size(); ++i)
      if (!pat_le(x.pats[i], y.pats[i])) return false;
    return true;
  }

  AsubPtr lub(const Asub& a, const Asub& b) const override {
    const auto& x = cast(a);
    const auto& y = cast(b);
    if (x.bot) return y.bot ? mk_bot((int)x.pats.size()) : mk(y.pats);
    if (y.bot) return mk(x.pats);
    std::vector<PatPtr> out;
    for (size_t i = 0; i < x.pats.size(); ++i)
      out.push_back(truncate(pat_lub(x.pats[i], y.pats[i]), k_));
    return mk(std::move(out));
  }

  AsubPtr glb(const Asub& a, const Asub& b) const override {
    const auto& x = cast(a);
    const auto& y = cast(b);
    if (x.bot || y.bot) return mk_bot((int)x.pats.size());
    std::vector<PatPtr> out;
    for (size_t i = 0; i < x.pats.size(); ++i) {
      PatPtr m = pat_glb(x.pats[i], y.pats[i]);
      if (!m) return mk_bot((int)x.pats.size());
      out.push_back(truncate(m, k_));
    }
    return mk(std::move(out));
  }

  PatPtr eval(const TermPtr& t, const std::vector<PatPtr>& pats, int depth_left) const {
    switch (t->kind) {
      case TermKind::Var: return pats[t->var];
      case TermKind::Atom: return Pat::atom(t->name);
      case TermKind::Num: return Pat::number(t->num);
      case TermKind::Comp: {
        if (depth_left <= 0) return Pat::top();
        std::vector<PatPtr> args;
        for (auto& a : t->args) args.push_back(eval(a, pats, depth_left - 1));
        return Pat::comp(t->name, std::move(args));
      }
    }
    return Pat::top();
  }

  // propagate the met pattern of a term back into its variables
  bool backprop(const TermPtr& t, const PatPtr& p, std::vector<PatPtr>& pats) const {
    if (p->k == Pat::K::Top) return true;
    switch (t->kind) {
      case TermKind::Var: {
        PatPtr m = pat_glb(pats[t->var], p);
        if (!m) return false;
        pats[t->var] = truncate(m, k_);
        return true;
      }
      case TermKind::Atom: return p->k == Pat::K::Atom && p->name == t->name;
      case TermKind::Num: return p->k == Pat::K::Num && p->num == t->num;
      case TermKind::Comp: {
        if (p->k != Pat::K::Comp || p->name != t->name || p->args.size() != t->args.size())
          return false;
        for (size_t i = 0; i < t->args.size(); ++i)
          if (!backprop(t->args[i], p->args[i], pats)) return false;
        return true;
      }
    }
    return true;
  }

  AsubPtr abstract_unify(const TermPtr& t1, const TermPtr& t2, const Asub& a) const override {
    const auto& x = cast(a);
    int n = (int)x.pats.size();
    if (x.bot) return mk_bot(n);
    std::vector<PatPtr> out = x.pats;
    PatPtr p1 = eval(t1, out, k_);
    PatPtr p2 = eval(t2, out, k_);
    PatPtr m = pat_glb(p1, p2);
    if (!m) return mk_bot(n);
    m = truncate(m, k_);
    if (!backprop(t1, m, out)) return mk_bot(n);
    if (!backprop(t2, m, out)) return mk_bot(n);
    return mk(std::move(out));
  }

  AsubPtr transfer_builtin(const std::string& bname, const std::vector<TermPtr>& args,
                           const Asub& a) const override {
    const auto& x = cast(a);
    int n = (int)x.pats.size();
    if (x.bot) return mk_bot(n);
    const BuiltinDesc* desc = builtin_transfer_desc(bname, (int)args.size());
    if (!desc) {
      std::vector<PatPtr> out = x.pats;
      for (auto& t : args)
        for (int v : term_vars(t)) out[v] = Pat::top();
      return mk(std::move(out));
    }
    if (desc->always_fails) return mk_bot(n);

    AsubPtr acc;
    for (auto& entry : desc->entries) {
      bool ok = true;
      for (auto& c : entry.calls) {
        TermPtr inst = subst_vars(c, args);
        if (entails(inst, a) != Entail::Yes) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      AsubPtr applied = apply_entry(*desc, entry, args, x);
      acc = acc ? lub(*acc, *applied) : applied;
    }
    if (!acc) return mk_bot(n);
    return acc;
  }

  AsubPtr apply_entry(const BuiltinDesc& desc, const BuiltinEntry& entry,
                      const std::vector<TermPtr>& args, const DkAsub& x) const {
    int n = (int)x.pats.size();
    std::vector<PatPtr> out = x.pats;
    for (auto& sp : entry.success) {
      TermPtr inst = subst_vars(sp, args);
      if (inst->arity() == 0) continue;
      const TermPtr& t = inst->args.back();
      const std::string& f = inst->name;
      if (f == "num") {
        // result is some number: incompatible with atom/compound patterns
        PatPtr p = t->is_var() ? out[t->var] : eval(t, out, k_);
        if (p->k == Pat::K::Atom || p->k == Pat::K::Comp) return mk_bot(n);
        if (t->is_num()) continue;
        if (t->is_atom() || t->is_comp()) return mk_bot(n);
        continue;
      }
      if (f == "atom") {
        PatPtr p = t->is_var() ? out[t->var] : eval(t, out, k_);
        if (p->k == Pat::K::Num || p->k == Pat::K::Comp) return mk_bot(n);
        if (t->is_num() || t->is_comp()) return mk_bot(n);
        continue;
      }
      // list/ground/var results carry no depth-k structure
    }
    // bound arguments may have been instantiated; patterns are closed under
    // instantiation, so nothing to demote
    return mk(std::move(out));
  }

  AsubPtr project(const Asub& a, const std::vector<int>& keep) const override {
    const auto& x = cast(a);
    if (x.bot) return mk_bot((int)keep.size());
    std::vector<PatPtr> out;
    for (int v : keep) out.push_back(x.pats[v]);
    return mk(std::move(out));
  }

  AsubPtr join_disjoint(const Asub& a, const Asub& b) const override {
    const auto& x = cast(a);
    const auto& y = cast(b);
    if (x.bot || y.bot) return mk_bot((int)(x.pats.size() + y.pats.size()));
    std::vector<PatPtr> out = x.pats;
    out.insert(out.end(), y.pats.begin(), y.pats.end());
    return mk(std::move(out));
  }

  TermPtr pat_to_term(const PatPtr& p, int& next_var) const {
    switch (p->k) {
      case Pat::K::Top: return Term::mk_var(next_var++, "_");
      case Pat::K::Atom: return Term::mk_atom(p->name);
      case Pat::K::Num: return Term::mk_num(p->num);
      case Pat::K::Comp: {
        std::vector<TermPtr> args;
        for (auto& a : p->args) args.push_back(pat_to_term(a, next_var));
        return Term::mk_comp(p->name, std::move(args));
      }
    }
    return Term::mk_var(next_var++, "_");
  }

  std::vector<TermPtr> to_properties(const Asub& a,
                                     const std::vector<TermPtr>& var_terms) const override {
    const auto& x = cast(a);
    std::vector<TermPtr> out;
    if (x.bot) {
      out.push_back(Term::mk_atom("unreachable"));
      return out;
    }
    int next_var = (int)x.pats.size();
    for (size_t v = 0; v < x.pats.size(); ++v) {
      if (x.pats[v]->k == Pat::K::Top) continue;
      out.push_back(Term::mk_comp("instance", {var_terms[v], pat_to_term(x.pats[v], next_var)}));
    }
    return out;
  }

  bool match_term(const TermPtr& t, const PatPtr& p) const {
    if (p->k == Pat::K::Top) return true;
    switch (t->kind) {
      case TermKind::Var: return false;
      case TermKind::Atom: return p->k == Pat::K::Atom && p->name == t->name;
      case TermKind::Num: return p->k == Pat::K::Num && p->num == t->num;
      case TermKind::Comp: {
        if (p->k != Pat::K::Comp || p->name != t->name || p->args.size() != t->args.size())
          return false;
        for (size_t i = 0; i < t->args.size(); ++i)
          if (!match_term(t->args[i], p->args[i])) return false;
        return true;
      }
    }
    return false;
  }

  bool gamma_member(const std::vector<TermPtr>& binding, const Asub& a) const override {
    const auto& x = cast(a);
    if (x.bot) return false;
    for (size_t v = 0; v < x.pats.size(); ++v)
      if (!match_term(binding[v], x.pats[v])) return false;
    return true;
  }

  PatPtr pattern_of_term(const TermPtr& t, int depth_left) const {
    switch (t->kind) {
      case TermKind::Var: return Pat::top();
      case TermKind::Atom: return Pat::atom(t->name);
      case TermKind::Num: return Pat::number(t->num);
      case TermKind::Comp: {
        if (depth_left <= 0) return Pat::top();
        std::vector<PatPtr> args;
        for (auto& a : t->args) args.push_back(pattern_of_term(a, depth_left - 1));
        return Pat::comp(t->name, std::move(args));
      }
    }
    return Pat::top();
  }

  AsubPtr abstract_props(const std::vector<TermPtr>& props, int nvars) const override {
    std::vector<PatPtr> out(nvars, Pat::top());
    for (auto& p : props) {
      if (!(p->is_comp() && p->name == "instance" && p->arity() == 2)) continue;
      if (!p->args[0]->is_var()) continue;
      int v = p->args[0]->var;
      if (v >= nvars) continue;
      PatPtr pat = pattern_of_term(p->args[1], k_);
      PatPtr m = pat_glb(out[v], pat);
      if (!m) return mk_bot(nvars);
      out[v] = truncate(m, k_);
    }
    return mk(std::move(out));
  }

  Entail entails(const TermPtr& prop, const Asub& a) const override {
    const auto& x = cast(a);
    if (x.bot) return Entail::Yes;
    const std::string& f = prop->name;
    if (f == "any") return Entail::Yes;
    if (prop->arity() == 0) return Entail::Maybe;
    const TermPtr& t = f == "instance" && prop->arity() == 2 ? prop->args[0] : prop->args.back();
    PatPtr p = eval(t, x.pats, k_);
    if (f == "num") {
      if (p->k == Pat::K::Num) return Entail::Yes;
      if (p->k == Pat::K::Atom || p->k == Pat::K::Comp) return Entail::No;
      return Entail::Maybe;
    }
    if (f == "atom") {
      if (p->k == Pat::K::Atom) return Entail::Yes;
      if (p->k == Pat::K::Num || p->k == Pat::K::Comp) return Entail::No;
      return Entail::Maybe;
    }
    if (f == "nonvar") {
      if (p->k != Pat::K::Top) return Entail::Yes;
      return Entail::Maybe;
    }
    if (f == "var") {
      if (p->k != Pat::K::Top) return Entail::No;
      return Entail::Maybe;
    }
    if (f == "ground") {
      // a pattern without top leaves pins the exact ground term
      std::function<bool(const PatPtr&)> concrete = [&](const PatPtr& q) {
        if (q->k == Pat::K::Top) return false;
        for (auto& s : q->args)
          if (!concrete(s)) return false;
        return true;
      };
      if (concrete(p)) return Entail::Yes;
      return Entail::Maybe;
    }
    if (f == "list" && prop->arity() == 1) {
      const Pat* cur = p.get();
      while (true) {
        if (cur->k == Pat::K::Atom) return cur->name == "[]" ? Entail::Yes : Entail::No;
        if (cur->k == Pat::K::Num) return Entail::No;
        if (cur->k == Pat::K::Comp) {
          if (cur->name != "." || cur->args.size() != 2) return Entail::No;
          cur = cur->args[1].get();
          continue;
        }
        return Entail::Maybe;
      }
    }
    if (f == "instance" && prop->arity() == 2) {
      PatPtr want = pattern_of_term(prop->args[1], k_);
      if (pat_le(p, want)) return Entail::Yes;
      if (!pat_glb(p, want)) return Entail::No;
      return Entail::Maybe;
    }
    return Entail::Maybe;
  }

 private:
  int k_;
};

}  // namespace

const Domain* depthk_domain() {
  static DepthKDomain d(2);
  return &d;
}

}  // namespace mlp
