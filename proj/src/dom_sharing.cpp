#include <algorithm>
#include <map>
#include <set>

#include "mlp/builtin_table.hpp"
#include "mlp/domain.hpp"
#include "mlp/faults.hpp"

namespace mlp {

namespace {

using VarSet = std::set<int>;
using ShSet = std::set<VarSet>;

constexpr size_t kStarLimit = 4096;
constexpr size_t kCliqueCap = 64;

struct ShAsub : Asub {
  bool unreachable = false;
  int n = 0;
  ShSet sharing;
  VarSet freeness;
  VarSet linear;
  ShSet cliques;

  std::string to_string() const override {
    if (unreachable) return "bottom";
    std::string s = "sh:{";
    bool f1 = true;
    for (auto& g : sharing) {
      if (!f1) s += ",";
      f1 = false;
      s += "[";
      bool f2 = true;
      for (int v : g) {
        if (!f2) s += ",";
        f2 = false;
        s += std::to_string(v);
      }
      s += "]";
    }
    s += "}";
    if (!cliques.empty()) {
      s += " cl:{";
      for (auto& k : cliques) {
        s += "[";
        for (int v : k) s += std::to_string(v) + ",";
        s += "]";
      }
      s += "}";
    }
    s += " f:{";
    for (int v : freeness) s += std::to_string(v) + ",";
    s += "} l:{";
    for (int v : linear) s += std::to_string(v) + ",";
    s += "}";
    return s;
  }
};

const ShAsub& cast(const Asub& a) { return static_cast<const ShAsub&>(a); }

VarSet union_of(const ShSet& groups) {
  VarSet out;
  for (auto& g : groups) out.insert(g.begin(), g.end());
  return out;
}

bool subset(const VarSet& a, const VarSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// closure of a group set under pairwise union
ShSet star(const ShSet& s) {
  ShSet out = s;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<VarSet> items(out.begin(), out.end());
    for (size_t i = 0; i < items.size(); ++i)
      for (size_t j = i + 1; j < items.size(); ++j) {
        VarSet u = items[i];
        u.insert(items[j].begin(), items[j].end());
        if (out.insert(u).second) {
          changed = true;
          if (out.size() > kStarLimit) throw DomainError("sharing star-union blow-up");
        }
      }
  }
  return out;
}

ShSet bin(const ShSet& a, const ShSet& b) {
  ShSet out;
  for (auto& x : a)
    for (auto& y : b) {
      VarSet u = x;
      u.insert(y.begin(), y.end());
      out.insert(u);
    }
  return out;
}

void powerset_into(const VarSet& k, ShSet& out) {
  std::vector<int> vs(k.begin(), k.end());
  size_t total = (size_t)1 << vs.size();
  for (size_t mask = 1; mask < total; ++mask) {
    VarSet g;
    for (size_t i = 0; i < vs.size(); ++i)
      if (mask & (1ull << i)) g.insert(vs[i]);
    out.insert(g);
  }
}

class SharingDomain : public Domain {
 public:
  SharingDomain(std::string name, bool freeness, bool cliques)
      : name_(std::move(name)), track_free_(freeness), cliques_on_(cliques) {}

  std::string name() const override { return name_; }

  std::shared_ptr<ShAsub> mk(int n) const {
    auto a = std::make_shared<ShAsub>();
    a->n = n;
    return a;
  }

  AsubPtr bottom(int n) const override {
    auto a = mk(n);
    a->unreachable = true;
    return a;
  }

  AsubPtr top(int n) const override {
    auto a = mk(n);
    VarSet all;
    for (int v = 0; v < n; ++v) all.insert(v);
    if (n == 0) return a;
    if (cliques_on_) {
      a->cliques.insert(all);
    } else {
      if (n > 12) throw DomainError("sharing top over too many variables");
      powerset_into(all, a->sharing);
    }
    return a;
  }

  AsubPtr fresh(int n) const override {
    auto a = mk(n);
    for (int v = 0; v < n; ++v) {
      a->sharing.insert({v});
      if (track_free_) {
        a->freeness.insert(v);
        a->linear.insert(v);
      }
    }
    return a;
  }

  int num_vars(const Asub& a) const override { return cast(a).n; }
  bool is_bottom(const Asub& a) const override { return cast(a).unreachable; }

  bool covered(const VarSet& g, const ShAsub& a) const {
    if (a.sharing.count(g)) return true;
    for (auto& k : a.cliques)
      if (subset(g, k)) return true;
    return false;
  }

  bool leq(const Asub& aa, const Asub& bb) const override {
    const auto& a = cast(aa);
    const auto& b = cast(bb);
    if (a.unreachable) return true;
    if (b.unreachable) return false;
    for (auto& g : a.sharing)
      if (!covered(g, b)) return false;
    for (auto& k : a.cliques) {
      bool ok = false;
      for (auto& k2 : b.cliques)
        if (subset(k, k2)) ok = true;
      if (!ok) {
        if (k.size() > 12) return false;
        ShSet ps;
        powerset_into(k, ps);
        for (auto& g : ps)
          if (!covered(g, b)) return false;
      }
    }
    if (!subset(b.freeness, a.freeness)) return false;
    if (!subset(b.linear, a.linear)) return false;
    return true;
  }

  std::shared_ptr<ShAsub> normalize(std::shared_ptr<ShAsub> a) const {
    if (a->unreachable) return a;
    // groups covered by a clique are redundant
    if (!a->cliques.empty()) {
      ShSet pruned;
      for (auto& g : a->sharing) {
        bool in_clique = false;
        for (auto& k : a->cliques)
          if (subset(g, k)) in_clique = true;
        if (!in_clique) pruned.insert(g);
      }
      a->sharing = std::move(pruned);
      // cliques contained in other cliques are redundant
      ShSet ks;
      for (auto& k : a->cliques) {
        bool inside = false;
        for (auto& k2 : a->cliques)
          if (k != k2 && subset(k, k2)) inside = true;
        if (!inside) ks.insert(k);
      }
      a->cliques = std::move(ks);
    }
    if (!track_free_) {
      a->freeness.clear();
      a->linear.clear();
    } else {
      VarSet occurring = union_of(a->sharing);
      VarSet cl = union_of(a->cliques);
      occurring.insert(cl.begin(), cl.end());
      // ground variables are not free; they are linear
      VarSet f2, l2 = a->linear;
      for (int v : a->freeness)
        if (occurring.count(v)) f2.insert(v);
      a->freeness = std::move(f2);
      for (int v = 0; v < a->n; ++v)
        if (!occurring.count(v)) l2.insert(v);
      for (int v : a->freeness) l2.insert(v);
      a->linear = std::move(l2);
    }
    if (cliques_on_) compact(*a);
    return a;
  }

  void compact(ShAsub& a) const {
    // exact powerset compaction, largest groups first
    std::vector<VarSet> groups(a.sharing.begin(), a.sharing.end());
    std::sort(groups.begin(), groups.end(),
              [](const VarSet& x, const VarSet& y) { return x.size() > y.size(); });
    for (auto& g : groups) {
      if (g.size() < 2 || g.size() > 10) continue;
      if (!a.sharing.count(g)) continue;
      ShSet ps;
      powerset_into(g, ps);
      bool full = true;
      for (auto& s : ps)
        if (!a.sharing.count(s)) full = false;
      if (!full) continue;
      for (auto& s : ps) a.sharing.erase(s);
      a.cliques.insert(g);
    }
    // forced widening when the sharing set is too large
    if (a.sharing.size() > kCliqueCap) {
      VarSet all = union_of(a.sharing);
      a.cliques.insert(all);
      ShSet keep;
      for (auto& g : a.sharing) {
        bool inside = subset(g, all);
        if (!inside) keep.insert(g);
      }
      a.sharing = std::move(keep);
    }
  }

  AsubPtr lub(const Asub& aa, const Asub& bb) const override {
    const auto& a = cast(aa);
    const auto& b = cast(bb);
    if (a.unreachable) return normalize(std::make_shared<ShAsub>(b));
    if (b.unreachable) return normalize(std::make_shared<ShAsub>(a));
    auto out = mk(a.n);
    out->sharing = a.sharing;
    out->sharing.insert(b.sharing.begin(), b.sharing.end());
    out->cliques = a.cliques;
    out->cliques.insert(b.cliques.begin(), b.cliques.end());
    if (track_free_) {
      std::set_intersection(a.freeness.begin(), a.freeness.end(), b.freeness.begin(),
                            b.freeness.end(), std::inserter(out->freeness, out->freeness.end()));
      std::set_intersection(a.linear.begin(), a.linear.end(), b.linear.begin(), b.linear.end(),
                            std::inserter(out->linear, out->linear.end()));
    }
    return normalize(out);
  }

  AsubPtr glb(const Asub& aa, const Asub& bb) const override {
    const auto& a0 = cast(aa);
    const auto& b0 = cast(bb);
    if (a0.unreachable || b0.unreachable) return bottom(a0.n);
    // expand (small) cliques so the meet is exact
    auto expand = [&](const ShAsub& x) {
      ShAsub e = x;
      for (auto& k : x.cliques) {
        if (k.size() > 12) throw DomainError("glb over an oversized clique");
        powerset_into(k, e.sharing);
      }
      e.cliques.clear();
      return e;
    };
    ShAsub a = expand(a0);
    ShAsub b = expand(b0);
    auto out = mk(a.n);
    std::set_intersection(a.sharing.begin(), a.sharing.end(), b.sharing.begin(), b.sharing.end(),
                          std::inserter(out->sharing, out->sharing.end()));
    if (track_free_) {
      out->freeness = a.freeness;
      out->freeness.insert(b.freeness.begin(), b.freeness.end());
      out->linear = a.linear;
      out->linear.insert(b.linear.begin(), b.linear.end());
      VarSet occurring = union_of(out->sharing);
      for (int v : out->freeness)
        if (!occurring.count(v)) return bottom(a.n);  // free and ground: empty meet
    }
    return normalize(out);
  }

  // --- amgu ---

  struct Equations {
    bool clash = false;
    std::vector<std::pair<int, TermPtr>> eqs;  // var = term
  };

  void syn_unify(const TermPtr& t1, const TermPtr& t2, Equations& out) const {
    if (out.clash) return;
    if (t1->is_var()) {
      if (t2->is_var() && t2->var == t1->var) return;
      if (!t2->is_var() && term_has_var(t2, t1->var)) {
        out.clash = true;  // occurs check
        return;
      }
      out.eqs.push_back({t1->var, t2});
      return;
    }
    if (t2->is_var()) {
      if (term_has_var(t1, t2->var)) {
        out.clash = true;
        return;
      }
      out.eqs.push_back({t2->var, t1});
      return;
    }
    if (t1->kind != t2->kind) {
      out.clash = true;
      return;
    }
    switch (t1->kind) {
      case TermKind::Atom:
        if (t1->name != t2->name) out.clash = true;
        return;
      case TermKind::Num:
        if (t1->num != t2->num) out.clash = true;
        return;
      case TermKind::Comp:
        if (t1->name != t2->name || t1->args.size() != t2->args.size()) {
          out.clash = true;
          return;
        }
        for (size_t i = 0; i < t1->args.size(); ++i) syn_unify(t1->args[i], t2->args[i], out);
        return;
      default: return;
    }
  }

  bool var_ground(int v, const ShAsub& a) const {
    for (auto& g : a.sharing)
      if (g.count(v)) return false;
    for (auto& k : a.cliques)
      if (k.count(v)) return false;
    return true;
  }

  bool term_ground_in(const TermPtr& t, const ShAsub& a) const {
    for (int v : term_vars(t))
      if (!var_ground(v, a)) return false;
    return true;
  }

  void ground_out(ShAsub& a, const VarSet& vars) const {
    // everything that may share with the grounded vars gets instantiated
    // with ground content: it loses freeness (linearity survives)
    VarSet affected;
    ShSet keep;
    for (auto& g : a.sharing) {
      bool hit = false;
      for (int v : vars)
        if (g.count(v)) hit = true;
      if (hit)
        affected.insert(g.begin(), g.end());
      else
        keep.insert(g);
    }
    a.sharing = std::move(keep);
    ShSet ks;
    for (auto& k : a.cliques) {
      bool hit = false;
      for (int v : vars)
        if (k.count(v)) hit = true;
      if (hit) affected.insert(k.begin(), k.end());
      VarSet trimmed;
      for (int v : k)
        if (!vars.count(v)) trimmed.insert(v);
      if (!trimmed.empty()) ks.insert(trimmed);
    }
    a.cliques = std::move(ks);
    for (int v : affected) a.freeness.erase(v);
    for (int v : vars) {
      a.freeness.erase(v);
      a.linear.insert(v);
    }
  }

  void amgu_step(ShAsub& a, int x, const TermPtr& t) const {
    if (t->is_var() && t->var == x) return;
    VarSet vt;
    for (int v : term_vars(t)) vt.insert(v);

    bool gx = var_ground(x, a);
    bool gt = true;
    for (int v : vt)
      if (!var_ground(v, a)) gt = false;

    if (gx && gt) return;
    if (gx) {
      ground_out(a, vt);
      return;
    }
    if (gt) {
      ground_out(a, {x});
      return;
    }

    ShSet sx, st, irr;
    for (auto& g : a.sharing) {
      bool rx = g.count(x) > 0;
      bool rt = false;
      for (int v : vt)
        if (g.count(v)) rt = true;
      if (rx) sx.insert(g);
      if (rt) st.insert(g);
      if (!rx && !rt) irr.insert(g);
    }
    ShSet clx, clt, clirr;
    for (auto& k : a.cliques) {
      bool rx = k.count(x) > 0;
      bool rt = false;
      for (int v : vt)
        if (k.count(v)) rt = true;
      if (rx || rt)
        (rx ? clx : clt).insert(k);
      else
        clirr.insert(k);
    }

    if (!clx.empty() || !clt.empty()) {
      // conservative clique merge of everything relevant
      VarSet big;
      for (auto& k : clx) big.insert(k.begin(), k.end());
      for (auto& k : clt) big.insert(k.begin(), k.end());
      for (auto& g : sx) big.insert(g.begin(), g.end());
      for (auto& g : st) big.insert(g.begin(), g.end());
      big.insert(x);
      big.insert(vt.begin(), vt.end());
      a.sharing = std::move(irr);
      a.cliques = std::move(clirr);
      a.cliques.insert(big);
      for (int v : big) {
        a.freeness.erase(v);
        a.linear.erase(v);
      }
      return;
    }

    bool x_free = a.freeness.count(x) > 0;
    bool t_free = t->is_var() && a.freeness.count(t->var) > 0;

    // linearity of the term the bound variable receives: syntactically
    // linear, every variable linear, and no two of its variables may share
    auto content_linear = [&](const TermPtr& content, const VarSet& cvars) {
      if (!is_linear_term(content)) return false;
      for (int v : cvars)
        if (!a.linear.count(v)) return false;
      for (auto& g : a.sharing) {
        int hits = 0;
        for (int v : cvars)
          if (g.count(v)) hits++;
        if (hits >= 2) return false;
      }
      return true;
    };

    ShSet combined =
        (x_free || t_free) ? bin(sx, st) : bin(star(sx), star(st));
    a.sharing = std::move(irr);
    a.sharing.insert(combined.begin(), combined.end());

    VarSet touched_x = union_of(sx);
    VarSet touched_t = union_of(st);

    // Binding one free runtime variable u to some content: variables whose
    // terms may contain u lose freeness; they keep linearity when the
    // content is linear and they share nothing with the content's own
    // variables. The content's variables are occurs-check-protected.
    auto bind_free_side = [&](int bound, const VarSet& bound_side_touched,
                              const TermPtr& content, const VarSet& cvars,
                              const VarSet& content_side_touched) {
      bool lin = content_linear(content, cvars);
      for (int v : bound_side_touched) {
        if (v != bound && cvars.count(v)) continue;
        a.freeness.erase(v);
        if (!(lin && (v == bound || !content_side_touched.count(v)))) a.linear.erase(v);
      }
      a.freeness.erase(bound);
      if (lin)
        a.linear.insert(bound);
      else
        a.linear.erase(bound);
    };

    if (x_free && t_free) {
      // aliasing two free variables instantiates nothing
    } else if (x_free) {
      bind_free_side(x, touched_x, t, vt, touched_t);
    } else if (t_free) {
      VarSet xv = {x};
      bind_free_side(t->var, touched_t, Term::mk_var(x), xv, touched_x);
    } else {
      for (int v : touched_x) {
        a.freeness.erase(v);
        a.linear.erase(v);
      }
      for (int v : touched_t) {
        a.freeness.erase(v);
        a.linear.erase(v);
      }
      a.freeness.erase(x);
      a.linear.erase(x);
      for (int v : vt) {
        a.freeness.erase(v);
        a.linear.erase(v);
      }
    }
    for (int v : a.freeness) a.linear.insert(v);
  }

  AsubPtr abstract_unify(const TermPtr& t1, const TermPtr& t2, const Asub& aa) const override {
    const auto& a = cast(aa);
    if (a.unreachable) return bottom(a.n);
    Equations eqs;
    syn_unify(t1, t2, eqs);
    if (eqs.clash) return bottom(a.n);
    auto out = std::make_shared<ShAsub>(a);
    for (auto& [x, t] : eqs.eqs) amgu_step(*out, x, t);
    return normalize(out);
  }

  // --- builtins ---

  AsubPtr transfer_builtin(const std::string& bname, const std::vector<TermPtr>& args,
                           const Asub& aa) const override {
    const auto& a = cast(aa);
    if (a.unreachable) return bottom(a.n);
    const BuiltinDesc* desc = builtin_transfer_desc(bname, (int)args.size());
    if (!desc) {
      // unknown builtin: conservatively merge everything its variables touch
      auto out = std::make_shared<ShAsub>(a);
      VarSet vs;
      for (auto& t : args)
        for (int v : term_vars(t)) vs.insert(v);
      if (!vs.empty()) {
        TermPtr lump = Term::mk_comp("$lump", std::vector<TermPtr>(args.begin(), args.end()));
        amgu_step(*out, *vs.begin(), lump);
        for (int v : vs) {
          out->freeness.erase(v);
          out->linear.erase(v);
        }
      }
      return normalize(out);
    }
    if (desc->always_fails) return bottom(a.n);

    AsubPtr acc;
    for (auto& entry : desc->entries) {
      bool ok = true;
      for (auto& c : entry.calls) {
        TermPtr inst = subst_vars(c, args);
        if (entails(inst, aa) != Entail::Yes) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      AsubPtr applied = apply_entry(*desc, entry, args, a);
      acc = acc ? lub(*acc, *applied) : applied;
    }
    if (!acc) return bottom(a.n);
    return acc;
  }

  AsubPtr apply_entry(const BuiltinDesc& desc, const BuiltinEntry& entry,
                      const std::vector<TermPtr>& args, const ShAsub& a) const {
    auto out = std::make_shared<ShAsub>(a);
    for (auto& sp : entry.success) {
      TermPtr inst = subst_vars(sp, args);
      const std::string& f = inst->name;
      if (inst->arity() == 0) continue;
      const TermPtr& t = inst->args.back();
      bool groundish = f == "ground" || f == "num" || f == "atom" ||
                       (f == "list" && inst->arity() == 2 && inst->args[0]->is_atom() &&
                        (inst->args[0]->name == "num" || inst->args[0]->name == "atom"));
      if (groundish) {
        if ((f == "num" || f == "atom") && t->is_comp()) return bottom(a.n);
        if (f == "num" && t->is_atom()) return bottom(a.n);
        if (f == "atom" && t->is_num()) return bottom(a.n);
        VarSet vs;
        for (int v : term_vars(t)) vs.insert(v);
        ground_out(*out, vs);
      } else if (f == "var") {
        if (!t->is_var()) return bottom(a.n);
        if (var_ground(t->var, *out)) return bottom(a.n);
        if (track_free_) out->freeness.insert(t->var);
      } else {
        // nonvar-ish result on a bound position: spine instantiation
        for (int v : term_vars(t)) {
          out->freeness.erase(v);
          out->linear.erase(v);
        }
      }
    }
    for (int p : desc.binds) {
      // any variable of a bound argument may have been instantiated
      for (int v : term_vars(args[p]))
        if (!var_ground(v, *out)) {
          out->freeness.erase(v);
          out->linear.erase(v);
        }
    }
    if (desc.name == "arg" && args.size() == 3) {
      // the extracted argument shares with the source term; merging against
      // the whole term over-approximates binding to a subterm. The syntactic
      // unification path is not applicable here, so merge at group level.
      std::vector<int> va = term_vars(args[2]);
      if (!va.empty()) {
        std::vector<TermPtr> parts = {args[2], args[1]};
        amgu_step(*out, va[0], Term::mk_comp("$merge", std::move(parts)));
      }
    }
    return normalize(out);
  }

  // --- projections ---

  AsubPtr project(const Asub& aa, const std::vector<int>& keep) const override {
    const auto& a = cast(aa);
    if (a.unreachable) return bottom((int)keep.size());
    std::map<int, int> ren;
    for (size_t i = 0; i < keep.size(); ++i) ren[keep[i]] = (int)i;
    auto out = mk((int)keep.size());
    for (auto& g : a.sharing) {
      VarSet pg;
      for (int v : g) {
        auto it = ren.find(v);
        if (it != ren.end()) pg.insert(it->second);
      }
      if (!pg.empty()) out->sharing.insert(pg);
    }
    for (auto& k : a.cliques) {
      VarSet pk;
      for (int v : k) {
        auto it = ren.find(v);
        if (it != ren.end()) pk.insert(it->second);
      }
      if (!pk.empty()) out->cliques.insert(pk);
    }
    for (int v : a.freeness)
      if (ren.count(v)) out->freeness.insert(ren[v]);
    for (int v : a.linear)
      if (ren.count(v)) out->linear.insert(ren[v]);
    return normalize(out);
  }

  AsubPtr join_disjoint(const Asub& aa, const Asub& bb) const override {
    const auto& a = cast(aa);
    const auto& b = cast(bb);
    int n = a.n + b.n;
    if (a.unreachable || b.unreachable) return bottom(n);
    auto out = mk(n);
    out->sharing = a.sharing;
    out->cliques = a.cliques;
    out->freeness = a.freeness;
    out->linear = a.linear;
    for (auto& g : b.sharing) {
      VarSet s;
      for (int v : g) s.insert(v + a.n);
      out->sharing.insert(s);
    }
    for (auto& k : b.cliques) {
      VarSet s;
      for (int v : k) s.insert(v + a.n);
      out->cliques.insert(s);
    }
    for (int v : b.freeness) out->freeness.insert(v + a.n);
    for (int v : b.linear) out->linear.insert(v + a.n);
    return normalize(out);
  }

  // --- properties ---

  std::vector<TermPtr> to_properties(const Asub& aa,
                                     const std::vector<TermPtr>& var_terms) const override {
    const auto& a = cast(aa);
    std::vector<TermPtr> out;
    if (a.unreachable) {
      out.push_back(Term::mk_atom("unreachable"));
      return out;
    }
    auto mklist = [](std::vector<TermPtr> ts) {
      TermPtr l = Term::nil();
      for (auto it = ts.rbegin(); it != ts.rend(); ++it) l = Term::cons(*it, l);
      return l;
    };
    VarSet occurring = union_of(a.sharing);
    VarSet cl = union_of(a.cliques);
    occurring.insert(cl.begin(), cl.end());
    std::vector<TermPtr> grounds;
    for (int v = 0; v < a.n; ++v)
      if (!occurring.count(v)) grounds.push_back(var_terms[v]);
    if (faults::enabled(faults::Fault::SpuriousGroundVars))
      grounds.push_back(Term::mk_var(a.n, "_A"));
    if (!grounds.empty()) out.push_back(Term::mk_comp("ground", {mklist(grounds)}));
    if (!a.sharing.empty() || !a.cliques.empty()) {
      std::vector<TermPtr> groups;
      for (auto& g : a.sharing) {
        std::vector<TermPtr> vs;
        for (int v : g) vs.push_back(var_terms[v]);
        groups.push_back(mklist(vs));
      }
      out.push_back(Term::mk_comp("mshare", {mklist(groups)}));
    }
    for (auto& k : a.cliques) {
      std::vector<TermPtr> vs;
      for (int v : k) vs.push_back(var_terms[v]);
      out.push_back(Term::mk_comp("clique", {mklist(vs)}));
    }
    for (int v : a.freeness) out.push_back(Term::mk_comp("var", {var_terms[v]}));
    if (track_free_) {
      std::vector<TermPtr> lin;
      for (int v : a.linear)
        if (occurring.count(v) && !a.freeness.count(v)) lin.push_back(var_terms[v]);
      if (!lin.empty()) out.push_back(Term::mk_comp("linear", {mklist(lin)}));
    }
    return out;
  }

  bool gamma_member(const std::vector<TermPtr>& binding, const Asub& aa) const override {
    const auto& a = cast(aa);
    if (a.unreachable) return false;
    // sharing groups of the binding
    std::map<int, VarSet> occ;  // runtime var -> clause vars whose value holds it
    for (int v = 0; v < a.n; ++v)
      for (int u : term_vars(binding[v])) occ[u].insert(v);
    for (auto& [u, g] : occ) {
      if (a.sharing.count(g)) continue;
      bool in_clique = false;
      for (auto& k : a.cliques)
        if (subset(g, k)) in_clique = true;
      if (!in_clique) return false;
    }
    for (int v : a.freeness)
      if (!binding[v]->is_var()) return false;
    for (int v : a.linear)
      if (!is_linear_term(binding[v])) return false;
    return true;
  }

  AsubPtr abstract_props(const std::vector<TermPtr>& props, int nvars) const override {
    VarSet ground, free, nonvar_vars;
    for (auto& p : props) {
      if (!p->is_comp() || p->args.empty()) continue;
      const std::string& f = p->name;
      const TermPtr& t =
          f == "instance" && p->arity() == 2 ? p->args[0] : p->args.back();
      if (!t->is_var()) continue;
      bool groundish = f == "ground" || f == "num" || f == "atom" ||
                       (f == "list" && p->arity() == 2 && p->args[0]->is_atom() &&
                        (p->args[0]->name == "num" || p->args[0]->name == "atom"));
      if (f == "instance" && p->arity() == 2) groundish = is_ground_term(p->args[1]);
      if (groundish)
        ground.insert(t->var);
      else if (f == "var")
        free.insert(t->var);
      else if (f == "list" || f == "nonvar" || f == "ngv" || f == "instance")
        nonvar_vars.insert(t->var);
    }
    auto out = mk(nvars);
    VarSet rest;
    for (int v = 0; v < nvars; ++v)
      if (!ground.count(v)) rest.insert(v);
    if (!rest.empty()) {
      if (cliques_on_ && rest.size() > 10) {
        out->cliques.insert(rest);
      } else if (rest.size() > 12) {
        throw DomainError("entry sharing over too many variables");
      } else {
        powerset_into(rest, out->sharing);
      }
    }
    if (track_free_) {
      for (int v : free) out->freeness.insert(v);
      for (int v : free) out->linear.insert(v);
      for (int v : ground) out->linear.insert(v);
    }
    (void)nonvar_vars;
    return normalize(out);
  }

  Entail entails(const TermPtr& prop, const Asub& aa) const override {
    const auto& a = cast(aa);
    if (a.unreachable) return Entail::Yes;
    const std::string& f = prop->name;
    if (f == "any") return Entail::Yes;
    if (prop->arity() == 0) return Entail::Maybe;
    const TermPtr& t = prop->args.back();
    bool tg = term_ground_in(t, a);
    bool tfree = t->is_var() && a.freeness.count(t->var) > 0;
    if (f == "ground") {
      if (tg) return Entail::Yes;
      if (tfree) return Entail::No;
      return Entail::Maybe;
    }
    if (f == "var") {
      if (tfree) return Entail::Yes;
      if (!t->is_var()) return Entail::No;
      if (var_ground(t->var, a)) return Entail::No;
      return Entail::Maybe;
    }
    if (f == "nonvar") {
      if (!t->is_var()) return Entail::Yes;
      if (tfree) return Entail::No;
      if (var_ground(t->var, a)) return Entail::Yes;
      return Entail::Maybe;
    }
    if (f == "nonground") {
      if (tfree) return Entail::Yes;
      if (tg) return Entail::No;
      return Entail::Maybe;
    }
    if (f == "num" || f == "atom") {
      if (f == "num" && t->is_num()) return Entail::Yes;
      if (f == "atom" && t->is_atom()) return Entail::Yes;
      if (t->is_comp()) return Entail::No;
      if (t->is_num() || t->is_atom()) return Entail::No;
      if (tfree) return Entail::No;
      return Entail::Maybe;
    }
    if (f == "list" && prop->arity() == 1) {
      if (t->is_num()) return Entail::No;
      if (t->is_atom()) return t->name == "[]" ? Entail::Yes : Entail::No;
      if (t->is_comp() && t->name != ".") return Entail::No;
      if (tfree) return Entail::No;
      return Entail::Maybe;
    }
    return Entail::Maybe;
  }

 private:
  std::string name_;
  bool track_free_;
  bool cliques_on_;
};

}  // namespace

const Domain* sharing_domain() {
  static SharingDomain d("sharing", false, false);
  return &d;
}
const Domain* shfr_domain() {
  static SharingDomain d("shfr", true, false);
  return &d;
}
const Domain* share_clique_domain() {
  static SharingDomain d("share_clique", true, true);
  return &d;
}

}  // namespace mlp
