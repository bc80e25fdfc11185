#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "mlp/domain.hpp"
#include "mlp/props.hpp"

namespace mlp {

namespace {

constexpr size_t kCardinalityCap = 2048;

// One concrete binding: a term per clause var, runtime vars canonicalized.
using Tuple = std::vector<TermPtr>;

struct TupleLess {
  bool operator()(const Tuple& a, const Tuple& b) const {
    std::string sa = terms_to_string(a), sb = terms_to_string(b);
    return sa < sb;
  }
};

using TupleSet = std::set<Tuple, TupleLess>;

struct CAsub : Asub {
  int n = 0;
  TupleSet tuples;
  std::string to_string() const override {
    std::string s = "{";
    for (auto& t : tuples) s += "(" + terms_to_string(t) + ")";
    return s + "}";
  }
};

const CAsub& cast(const Asub& a) { return static_cast<const CAsub&>(a); }

// Substitution-based unification over immutable terms with occurs check;
// this is deliberately a separate code path from the interpreter's store.
struct USubst {
  std::map<int, TermPtr> m;
  TermPtr walk(TermPtr t) const {
    while (t->is_var()) {
      auto it = m.find(t->var);
      if (it == m.end()) return t;
      t = it->second;
    }
    return t;
  }
  TermPtr resolve(const TermPtr& t) const {
    TermPtr w = walk(t);
    if (w->is_comp()) {
      std::vector<TermPtr> args;
      for (auto& a : w->args) args.push_back(resolve(a));
      return Term::mk_comp(w->name, std::move(args));
    }
    return w;
  }
  bool occurs(int v, const TermPtr& t) const {
    TermPtr w = walk(t);
    if (w->is_var()) return w->var == v;
    if (w->is_comp())
      for (auto& a : w->args)
        if (occurs(v, a)) return true;
    return false;
  }
  bool unify(const TermPtr& a0, const TermPtr& b0) {
    TermPtr a = walk(a0), b = walk(b0);
    if (a->is_var() && b->is_var() && a->var == b->var) return true;
    if (a->is_var()) {
      if (occurs(a->var, b)) return false;
      m[a->var] = b;
      return true;
    }
    if (b->is_var()) {
      if (occurs(b->var, a)) return false;
      m[b->var] = a;
      return true;
    }
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case TermKind::Atom: return a->name == b->name;
      case TermKind::Num: return a->num == b->num;
      case TermKind::Comp:
        if (a->name != b->name || a->args.size() != b->args.size()) return false;
        for (size_t i = 0; i < a->args.size(); ++i)
          if (!unify(a->args[i], b->args[i])) return false;
        return true;
      default: return false;
    }
  }
};

// renames a tuple's runtime vars so distinct tuples compare canonically;
// clause vars live in slots, runtime vars inside terms get negative-free ids
Tuple canon(const Tuple& t) { return canonical_terms(t); }

// rename the tuple's runtime vars away from [0, reserve)
Tuple shift_tuple(const Tuple& t, int reserve) {
  std::vector<TermPtr> out;
  std::map<int, TermPtr> ren;
  std::function<TermPtr(const TermPtr&)> go = [&](const TermPtr& x) -> TermPtr {
    if (x->is_var()) {
      auto it = ren.find(x->var);
      if (it != ren.end()) return it->second;
      int id = reserve + (int)ren.size();
      TermPtr v = Term::mk_var(id, "_" + std::to_string(id));
      ren[x->var] = v;
      return v;
    }
    if (x->is_comp()) {
      std::vector<TermPtr> args;
      for (auto& a : x->args) args.push_back(go(a));
      return Term::mk_comp(x->name, std::move(args));
    }
    return x;
  };
  for (auto& x : t) out.push_back(go(x));
  return out;
}

long long eval_ground_arith(const TermPtr& t, bool& ok) {
  if (!ok) return 0;
  if (t->is_num()) return t->num;
  if (t->is_comp() && t->args.size() == 2) {
    long long a = eval_ground_arith(t->args[0], ok);
    long long b = eval_ground_arith(t->args[1], ok);
    if (!ok) return 0;
    if (t->name == "+") return a + b;
    if (t->name == "-") return a - b;
    if (t->name == "*") return a * b;
    if (t->name == "//") {
      if (b == 0) {
        ok = false;
        return 0;
      }
      return a / b;
    }
    if (t->name == "mod") {
      if (b == 0) {
        ok = false;
        return 0;
      }
      long long m = a % b;
      if (m != 0 && ((m < 0) != (b < 0))) m += b;
      return m;
    }
    if (t->name == "**") {
      if (b < 0) {
        ok = false;
        return 0;
      }
      long long acc = 1;
      for (long long i = 0; i < b; ++i) acc *= a;
      return acc;
    }
  }
  if (t->is_comp() && t->args.size() == 1 && t->name == "-") {
    long long a = eval_ground_arith(t->args[0], ok);
    return -a;
  }
  ok = false;
  return 0;
}

class ConcreteDomain : public Domain {
 public:
  std::string name() const override { return "concrete"; }

  AsubPtr mk(int n, TupleSet ts) const {
    if (ts.size() > kCardinalityCap)
      throw DomainError("concrete domain cardinality cap exceeded");
    auto a = std::make_shared<CAsub>();
    a->n = n;
    a->tuples = std::move(ts);
    return a;
  }

  AsubPtr bottom(int n) const override { return mk(n, {}); }
  AsubPtr top(int n) const override {
    throw DomainError("concrete domain has no top; analyses need a concrete entry");
  }
  AsubPtr fresh(int n) const override {
    Tuple t;
    for (int v = 0; v < n; ++v) t.push_back(Term::mk_var(v));
    TupleSet ts;
    ts.insert(canon(t));
    return mk(n, std::move(ts));
  }
  int num_vars(const Asub& a) const override { return cast(a).n; }
  bool is_bottom(const Asub& a) const override { return cast(a).tuples.empty(); }

  bool leq(const Asub& a, const Asub& b) const override {
    const auto& x = cast(a);
    const auto& y = cast(b);
    for (auto& t : x.tuples)
      if (!y.tuples.count(t)) return false;
    return true;
  }

  AsubPtr lub(const Asub& a, const Asub& b) const override {
    TupleSet ts = cast(a).tuples;
    ts.insert(cast(b).tuples.begin(), cast(b).tuples.end());
    return mk(cast(a).n, std::move(ts));
  }

  AsubPtr glb(const Asub& a, const Asub& b) const override {
    TupleSet out;
    for (auto& t : cast(a).tuples)
      if (cast(b).tuples.count(t)) out.insert(t);
    return mk(cast(a).n, std::move(out));
  }

  AsubPtr abstract_unify(const TermPtr& t1, const TermPtr& t2, const Asub& a) const override {
    const auto& x = cast(a);
    TupleSet out;
    for (auto& tup : x.tuples) {
      // tuple runtime vars are canonical ids; clause vars in t1/t2 refer to
      // tuple slots. Substitute then unify.
      USubst s;
      Tuple shifted = shift_tuple(tup, x.n);
      for (int v = 0; v < x.n; ++v) s.m[v] = shifted[v];
      if (!s.unify(t1, t2)) continue;
      Tuple next;
      for (int v = 0; v < x.n; ++v) next.push_back(s.resolve(Term::mk_var(v)));
      out.insert(canon(next));
    }
    return mk(x.n, std::move(out));
  }

  AsubPtr transfer_builtin(const std::string& bname, const std::vector<TermPtr>& args,
                           const Asub& a) const override {
    const auto& x = cast(a);
    TupleSet out;
    for (auto& tup : x.tuples) {
      Tuple shifted = shift_tuple(tup, x.n);
      auto inst = [&](const TermPtr& t) { return subst_vars(t, shifted); };
      auto keep = [&]() { out.insert(tup); };

      if (bname == "true") {
        keep();
        continue;
      }
      if (bname == "fail" || bname == "false") continue;
      if ((bname == "<" || bname == ">" || bname == "=<" || bname == ">=" || bname == "=:=" ||
           bname == "=\\=") &&
          args.size() == 2) {
        bool ok = true;
        long long l = eval_ground_arith(inst(args[0]), ok);
        long long r = eval_ground_arith(inst(args[1]), ok);
        if (!ok) continue;  // error aborts; no successor state
        bool pass = bname == "<"    ? l < r
                    : bname == ">"  ? l > r
                    : bname == "=<" ? l <= r
                    : bname == ">=" ? l >= r
                    : bname == "=:=" ? l == r
                                     : l != r;
        if (pass) keep();
        continue;
      }
      if (bname == "is" && args.size() == 2) {
        bool ok = true;
        long long v = eval_ground_arith(inst(args[1]), ok);
        if (!ok) continue;
        USubst s;
        Tuple sh = shift_tuple(tup, x.n);
        for (int w = 0; w < x.n; ++w) s.m[w] = sh[w];
        if (!s.unify(args[0], Term::mk_num(v))) continue;
        Tuple next;
        for (int w = 0; w < x.n; ++w) next.push_back(s.resolve(Term::mk_var(w)));
        out.insert(canon(next));
        continue;
      }
      if ((bname == "==" || bname == "\\==") && args.size() == 2) {
        bool eq = struct_eq(inst(args[0]), inst(args[1]));
        if ((bname == "==") == eq) keep();
        continue;
      }
      if (bname == "\\=" && args.size() == 2) {
        USubst s;
        if (!s.unify(inst(args[0]), inst(args[1]))) keep();
        continue;
      }
      if (bname == "length" && args.size() == 2) {
        TermPtr l = inst(args[0]);
        std::vector<TermPtr> elems;
        if (is_proper_list(l) && list_elements(l, elems)) {
          USubst s;
          Tuple sh = shift_tuple(tup, x.n);
          for (int w = 0; w < x.n; ++w) s.m[w] = sh[w];
          if (!s.unify(args[1], Term::mk_num((long long)elems.size()))) continue;
          Tuple next;
          for (int w = 0; w < x.n; ++w) next.push_back(s.resolve(Term::mk_var(w)));
          out.insert(canon(next));
          continue;
        }
        // open lists under a concrete entry are out of this domain's remit;
        // drop the state (the interpreter comparison corpus avoids them)
        continue;
      }
      if (bname == "arg" && args.size() == 3) {
        TermPtr nn = inst(args[0]);
        TermPtr tt = inst(args[1]);
        if (!nn->is_num() || !tt->is_comp()) continue;
        long long i = nn->num;
        if (i < 1 || i > (long long)tt->args.size()) continue;
        USubst s;
        Tuple sh = shift_tuple(tup, x.n);
        for (int w = 0; w < x.n; ++w) s.m[w] = sh[w];
        if (!s.unify(args[2], tt->args[i - 1])) continue;
        Tuple next;
        for (int w = 0; w < x.n; ++w) next.push_back(s.resolve(Term::mk_var(w)));
        out.insert(canon(next));
        continue;
      }
      // property builtins evaluate on the instantiated term
      if (args.size() == 1 &&
          (bname == "num" || bname == "atom" || bname == "var" || bname == "nonvar" ||
           bname == "ground" || bname == "list" || bname == "nonground")) {
        if (eval_resolved_prop(bname, {inst(args[0])})) keep();
        continue;
      }
      throw DomainError("concrete domain: unsupported builtin " + bname);
    }
    return mk(x.n, std::move(out));
  }

  AsubPtr project(const Asub& a, const std::vector<int>& keep) const override {
    const auto& x = cast(a);
    TupleSet out;
    for (auto& tup : x.tuples) {
      Tuple t;
      for (int v : keep) t.push_back(tup[v]);
      out.insert(canon(t));
    }
    return mk((int)keep.size(), std::move(out));
  }

  AsubPtr join_disjoint(const Asub& a, const Asub& b) const override {
    const auto& x = cast(a);
    const auto& y = cast(b);
    TupleSet out;
    for (auto& ta : x.tuples)
      for (auto& tb : y.tuples) {
        Tuple t = ta;
        Tuple sb = shift_tuple(tb, 1'000'000);
        t.insert(t.end(), sb.begin(), sb.end());
        out.insert(canon(t));
      }
    return mk(x.n + y.n, std::move(out));
  }

  std::vector<TermPtr> to_properties(const Asub& a,
                                     const std::vector<TermPtr>& var_terms) const override {
    const auto& x = cast(a);
    std::vector<TermPtr> out;
    if (x.tuples.empty()) {
      out.push_back(Term::mk_atom("unreachable"));
      return out;
    }
    for (int v = 0; v < x.n; ++v) {
      bool all_ground = true, all_var = true, all_nonvar = true, all_num = true;
      for (auto& tup : x.tuples) {
        if (!is_ground_term(tup[v])) all_ground = false;
        if (!tup[v]->is_var()) all_var = false;
        if (tup[v]->is_var()) all_nonvar = false;
        if (!tup[v]->is_num()) all_num = false;
      }
      if (all_num)
        out.push_back(Term::mk_comp("num", {var_terms[v]}));
      else if (all_ground)
        out.push_back(Term::mk_comp("ground", {var_terms[v]}));
      else if (all_var)
        out.push_back(Term::mk_comp("var", {var_terms[v]}));
      else if (all_nonvar)
        out.push_back(Term::mk_comp("nonvar", {var_terms[v]}));
      else
        out.push_back(Term::mk_comp("any", {var_terms[v]}));
    }
    return out;
  }

  bool gamma_member(const std::vector<TermPtr>& binding, const Asub& a) const override {
    return cast(a).tuples.count(canon(binding)) > 0;
  }

  AsubPtr abstract_props(const std::vector<TermPtr>&, int) const override {
    throw DomainError("concrete domain entries must be concrete goals, not property formulas");
  }

  Entail entails(const TermPtr& prop, const Asub& a) const override {
    const auto& x = cast(a);
    if (x.tuples.empty()) return Entail::Yes;
    std::string f = prop->name;
    if (f == "any") return Entail::Yes;
    int yes = 0, no = 0;
    for (auto& tup : x.tuples) {
      Tuple shifted = shift_tuple(tup, x.n);
      std::vector<TermPtr> args;
      for (auto& t : prop->args) args.push_back(subst_vars(t, shifted));
      bool ok;
      try {
        ok = eval_resolved_prop(f, args);
      } catch (const UnrunnableProperty&) {
        return Entail::Maybe;
      }
      (ok ? yes : no)++;
    }
    if (no == 0) return Entail::Yes;
    if (yes == 0) return Entail::No;
    return Entail::Maybe;
  }

  /// Entry from a concrete goal: a single binding of the goal's variables.
  AsubPtr singleton(int nvars) const { return fresh(nvars); }
};

}  // namespace

const Domain* concrete_domain() {
  static ConcreteDomain d;
  return &d;
}

std::vector<std::vector<TermPtr>> concrete_asub_tuples(const Asub& a) {
  const auto* c = dynamic_cast<const CAsub*>(&a);
  if (!c) throw DomainError("not a concrete-domain element");
  return std::vector<std::vector<TermPtr>>(c->tuples.begin(), c->tuples.end());
}

}  // namespace mlp
