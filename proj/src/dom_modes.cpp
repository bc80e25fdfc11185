#include <algorithm>
#include <array>

#include "mlp/builtin_table.hpp"
#include "mlp/domain.hpp"
#include "mlp/faults.hpp"

namespace mlp {

namespace {

// 7-value instantiation lattice:
//   bottom < ground < nonvar < any
//   bottom < var < nonground < any
//   bottom < ngv < nonvar ; ngv < nonground
enum class M : uint8_t { Bot, Ground, Var, Ngv, Nonvar, Nonground, Any };
constexpr int kM = 7;

bool m_le(M a, M b) {
  if (a == b || a == M::Bot || b == M::Any) return true;
  switch (a) {
    case M::Ground: return b == M::Nonvar;
    case M::Var: return b == M::Nonground;
    case M::Ngv: return b == M::Nonvar || b == M::Nonground;
    default: return false;
  }
}

struct MTables {
  std::array<std::array<M, kM>, kM> lub{}, glb{};
  MTables() {
    for (int a = 0; a < kM; ++a)
      for (int b = 0; b < kM; ++b) {
        // least upper bound: minimal c with a<=c && b<=c
        M best = M::Any;
        for (int c = 0; c < kM; ++c)
          if (m_le((M)a, (M)c) && m_le((M)b, (M)c) && m_le((M)c, best)) best = (M)c;
        lub[a][b] = best;
        M worst = M::Bot;
        for (int c = 0; c < kM; ++c)
          if (m_le((M)c, (M)a) && m_le((M)c, (M)b) && m_le(worst, (M)c)) worst = (M)c;
        glb[a][b] = worst;
      }
  }
};

const MTables& tables() {
  static MTables t;
  return t;
}

M m_lub(M a, M b) { return tables().lub[(int)a][(int)b]; }
M m_glb(M a, M b) { return tables().glb[(int)a][(int)b]; }

bool nonground_now(M s) { return s == M::Var || s == M::Ngv || s == M::Nonground; }

// State of the most general unifier of two terms with the given states,
// assuming unification succeeds.
M m_unify(M a, M b) {
  if (a == M::Bot || b == M::Bot) return M::Bot;
  if (a == M::Ground || b == M::Ground) return M::Ground;
  if (a == M::Var) return b;
  if (b == M::Var) return a;
  bool nv = a == M::Nonvar || a == M::Ngv || b == M::Nonvar || b == M::Ngv;
  return nv ? M::Nonvar : M::Any;
}

// A free runtime variable was bound to a term of state su; the effect on an
// unrelated variable that may have contained (or been) it.
M demote_inst(M z, M su) {
  switch (z) {
    case M::Bot:
    case M::Ground:
    case M::Any: return z;
    case M::Var: return m_lub(M::Var, su);
    case M::Nonvar: return M::Nonvar;
    case M::Ngv: return nonground_now(su) ? M::Ngv : M::Nonvar;
    case M::Nonground: return nonground_now(su) ? M::Nonground : M::Any;
  }
  return M::Any;
}

// Inner variables possibly bound to unknown content.
M demote_gen(M z) {
  switch (z) {
    case M::Var: return M::Any;
    case M::Ngv: return M::Nonvar;
    case M::Nonground: return M::Any;
    default: return z;
  }
}

struct ModesAsub : Asub {
  bool bot = false;
  std::vector<M> vals;
  std::string to_string() const override {
    if (bot) return "bottom";
    static const char* names[] = {"bot", "g", "v", "ngv", "nv", "ngr", "any"};
    std::string s = "{";
    for (size_t i = 0; i < vals.size(); ++i) {
      if (i) s += ",";
      s += names[(int)vals[i]];
    }
    return s + "}";
  }
};

const ModesAsub& cast(const Asub& a) { return static_cast<const ModesAsub&>(a); }

AsubPtr mk_bot(int n) {
  auto a = std::make_shared<ModesAsub>();
  a->bot = true;
  a->vals.assign(n, M::Bot);
  return a;
}

AsubPtr mk(std::vector<M> vals) {
  for (M v : vals)
    if (v == M::Bot) return mk_bot((int)vals.size());
  auto a = std::make_shared<ModesAsub>();
  a->vals = std::move(vals);
  return a;
}

// Definite runtime failure of t1 = t2: syntactic clash or occurs-check
// violation (finite trees).
bool definite_clash(const TermPtr& a, const TermPtr& b) {
  if (a->is_var()) return !b->is_var() && term_has_var(b, a->var);
  if (b->is_var()) return term_has_var(a, b->var);
  if (a->kind != b->kind) return true;
  switch (a->kind) {
    case TermKind::Atom: return a->name != b->name;
    case TermKind::Num: return a->num != b->num;
    case TermKind::Comp: {
      if (a->name != b->name || a->args.size() != b->args.size()) return true;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (definite_clash(a->args[i], b->args[i])) return true;
      return false;
    }
    default: return false;
  }
}

class ModesDomain : public Domain {
 public:
  std::string name() const override { return "modes"; }

  AsubPtr bottom(int n) const override { return mk_bot(n); }
  AsubPtr top(int n) const override { return mk(std::vector<M>(n, M::Any)); }
  AsubPtr fresh(int n) const override { return mk(std::vector<M>(n, M::Var)); }
  int num_vars(const Asub& a) const override { return (int)cast(a).vals.size(); }
  bool is_bottom(const Asub& a) const override { return cast(a).bot; }

  bool leq(const Asub& a, const Asub& b) const override {
    const auto& x = cast(a);
    const auto& y = cast(b);
    if (x.bot) return true;
    if (y.bot) return false;
    for (size_t i = 0; i < x.vals.size(); ++i)
      if (!m_le(x.vals[i], y.vals[i])) return false;
    return true;
  }

  AsubPtr lub(const Asub& a, const Asub& b) const override {
    const auto& x = cast(a);
    const auto& y = cast(b);
    if (x.bot) return y.bot ? mk_bot((int)x.vals.size()) : mk(y.vals);
    if (y.bot) return mk(x.vals);
    std::vector<M> out(x.vals.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = m_lub(x.vals[i], y.vals[i]);
    return mk(std::move(out));
  }

  AsubPtr glb(const Asub& a, const Asub& b) const override {
    const auto& x = cast(a);
    const auto& y = cast(b);
    if (x.bot || y.bot) return mk_bot((int)x.vals.size());
    std::vector<M> out(x.vals.size());
    for (size_t i = 0; i < out.size(); ++i) {
      out[i] = m_glb(x.vals[i], y.vals[i]);
      if (out[i] == M::Bot) return mk_bot((int)x.vals.size());
    }
    return mk(std::move(out));
  }

  M eval(const TermPtr& t, const std::vector<M>& vals) const {
    switch (t->kind) {
      case TermKind::Var: return vals[t->var];
      case TermKind::Atom:
      case TermKind::Num: return M::Ground;
      case TermKind::Comp: {
        bool all_ground = true, some_nonground = false;
        for (auto& a : t->args) {
          M s = eval(a, vals);
          if (s == M::Bot) return M::Bot;
          if (s != M::Ground) all_ground = false;
          if (nonground_now(s)) some_nonground = true;
        }
        if (all_ground) return M::Ground;
        return some_nonground ? M::Ngv : M::Nonvar;
      }
    }
    return M::Any;
  }

  AsubPtr abstract_unify(const TermPtr& t1, const TermPtr& t2, const Asub& a) const override {
    const auto& x = cast(a);
    int n = (int)x.vals.size();
    if (x.bot) return mk_bot(n);
    if (definite_clash(t1, t2)) return mk_bot(n);
    const bool blind = faults::enabled(faults::Fault::ModesAliasingBlind);

    std::vector<M> out = x.vals;
    M s1 = eval(t1, x.vals);
    M s2 = eval(t2, x.vals);
    if (s1 == M::Bot || s2 == M::Bot) return mk_bot(n);
    M su = m_unify(s1, s2);

    const bool free1 = t1->is_var() && x.vals[t1->var] == M::Var;
    const bool free2 = t2->is_var() && x.vals[t2->var] == M::Var;

    if (free1 || free2) {
      // binding a free variable: by the occurs check the other side's own
      // variables are untouched
      const TermPtr& fv = free1 ? t1 : t2;
      const TermPtr& other = free1 ? t2 : t1;
      M so = free1 ? s2 : s1;
      out[fv->var] = so;
      std::vector<int> keep = term_vars(other);
      keep.push_back(fv->var);
      if (!blind) {
        for (int v = 0; v < n; ++v)
          if (std::find(keep.begin(), keep.end(), v) == keep.end())
            out[v] = demote_inst(out[v], so);
      }
      return mk(std::move(out));
    }

    std::vector<int> v1 = term_vars(t1);
    std::vector<int> v2 = term_vars(t2);
    auto in = [](const std::vector<int>& vs, int v) {
      return std::find(vs.begin(), vs.end(), v) != vs.end();
    };
    for (int v = 0; v < n; ++v) {
      bool d1 = in(v1, v), d2 = in(v2, v);
      if (!d1 && !d2) {
        if (!blind) out[v] = demote_gen(out[v]);
        continue;
      }
      if ((t1->is_var() && t1->var == v) || (t2->is_var() && t2->var == v)) {
        out[v] = su;
        continue;
      }
      M other = d1 && d2 ? (s1 == M::Ground || s2 == M::Ground ? M::Ground : M::Any)
                         : (d1 ? s2 : s1);
      out[v] = other == M::Ground ? m_unify(out[v], M::Ground) : demote_gen(out[v]);
    }
    return mk(std::move(out));
  }

  // --- PLAI plumbing with freshness knowledge ---

  AsubPtr restrict_call(const std::vector<TermPtr>& args, const Asub& caller) const override {
    const auto& x = cast(caller);
    if (x.bot) return mk_bot((int)args.size());
    std::vector<M> out;
    out.reserve(args.size());
    for (auto& t : args) out.push_back(eval(t, x.vals));
    for (M s : out)
      if (s == M::Bot) return mk_bot((int)args.size());
    return mk(std::move(out));
  }

  AsubPtr entry_from_call(const Asub& call_pat, const std::vector<TermPtr>& head_args,
                          int callee_nvars) const override {
    const auto& cp = cast(call_pat);
    if (cp.bot) return mk_bot(callee_nvars);
    std::vector<M> out(callee_nvars, M::Var);
    for (size_t j = 0; j < head_args.size(); ++j) {
      M s = cp.vals[j];
      const TermPtr& h = head_args[j];
      if (h->is_var()) {
        out[h->var] = m_unify(out[h->var], s);
        if (out[h->var] == M::Bot) return mk_bot(callee_nvars);
        continue;
      }
      for (int v : term_vars(h)) {
        M c = s == M::Ground ? M::Ground : (s == M::Var ? M::Var : M::Any);
        if (c != M::Var) out[v] = m_unify(out[v], c);
      }
    }
    return mk(std::move(out));
  }

  AsubPtr exit_to_head(const Asub& exit, const std::vector<TermPtr>& head_args) const override {
    const auto& x = cast(exit);
    if (x.bot) return mk_bot((int)head_args.size());
    std::vector<M> out;
    out.reserve(head_args.size());
    for (auto& h : head_args) out.push_back(eval(h, x.vals));
    return mk(std::move(out));
  }

  AsubPtr apply_success(const std::vector<TermPtr>& args, const Asub& caller,
                        const Asub& succ_pat) const override {
    const auto& x = cast(caller);
    const auto& sp = cast(succ_pat);
    int n = (int)x.vals.size();
    if (x.bot || sp.bot) return mk_bot(n);
    std::vector<M> out = x.vals;
    bool all_var = true;
    for (size_t j = 0; j < args.size(); ++j) {
      M s = sp.vals[j];
      if (s != M::Var) all_var = false;
      const TermPtr& t = args[j];
      if (t->is_var()) {
        out[t->var] = m_unify(out[t->var], s);
        if (out[t->var] == M::Bot) return mk_bot(n);
        continue;
      }
      for (int v : term_vars(t)) {
        if (s == M::Ground)
          out[v] = m_unify(out[v], M::Ground);
        else if (s != M::Var)
          out[v] = demote_gen(out[v]);
      }
    }
    if (!all_var) {
      std::vector<int> direct;
      for (auto& t : args)
        for (int v : term_vars(t)) direct.push_back(v);
      for (int v = 0; v < n; ++v)
        if (std::find(direct.begin(), direct.end(), v) == direct.end())
          out[v] = demote_inst(out[v], M::Any);
    }
    return mk(std::move(out));
  }

  // --- builtins ---

  M abstract_prop(const TermPtr& prop) const {
    const std::string& f = prop->name;
    int n = prop->arity();
    if (f == "ground" || f == "num" || f == "atom") return M::Ground;
    if (f == "var") return M::Var;
    if (f == "nonvar") return M::Nonvar;
    if (f == "nonground") return M::Nonground;
    if (f == "ngv") return M::Ngv;
    if (f == "list" && n == 1) return M::Nonvar;
    if (f == "list" && n == 2) {
      const TermPtr& ty = prop->args[0];
      if (ty->is_atom() && (ty->name == "num" || ty->name == "atom")) return M::Ground;
      if (ty->is_comp() && ty->name == "list") return abstract_prop(Term::mk_comp("list", {ty->args[0], prop->args[1]}));
      return M::Nonvar;
    }
    if (f == "instance" && n == 2) return is_ground_term(prop->args[1]) ? M::Ground : M::Nonvar;
    return M::Any;
  }

  // glb-refinement of out with "term t satisfies prop"; false on definite failure
  bool refine(std::vector<M>& out, const TermPtr& prop, const TermPtr& t) const {
    M p = abstract_prop(prop->is_comp() ? prop : Term::mk_atom("any"));
    const std::string& f = prop->name;
    if (t->is_var()) {
      out[t->var] = m_glb(out[t->var], p);
      return out[t->var] != M::Bot;
    }
    // property on a compound/constant argument
    if (f == "num" || f == "atom") {
      if (t->is_comp()) return false;
      if (f == "num" && !t->is_num()) return false;
      if (f == "atom" && !t->is_atom()) return false;
      return true;
    }
    if (f == "var") return false;  // a nonvar term is never free
    if (p == M::Ground) {
      for (int v : term_vars(t)) {
        out[v] = m_glb(out[v], M::Ground);
        if (out[v] == M::Bot) return false;
      }
    }
    return true;
  }

  AsubPtr transfer_builtin(const std::string& bname, const std::vector<TermPtr>& args,
                           const Asub& a) const override {
    const auto& x = cast(a);
    int n = (int)x.vals.size();
    if (x.bot) return mk_bot(n);
    const BuiltinDesc* desc = builtin_transfer_desc(bname, (int)args.size());
    if (!desc) {
      // unknown builtin: top success over its variables
      std::vector<M> out = x.vals;
      for (auto& t : args)
        for (int v : term_vars(t)) out[v] = M::Any;
      for (int v = 0; v < n; ++v) out[v] = demote_gen(out[v]);
      return mk(std::move(out));
    }
    if (desc->always_fails) return mk_bot(n);

    AsubPtr acc;  // lub over entailed entries
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
                      const std::vector<TermPtr>& args, const ModesAsub& x) const {
    int n = (int)x.vals.size();
    std::vector<M> out = x.vals;
    std::vector<M> bound_state(args.size(), M::Any);
    std::vector<bool> has_bound(args.size(), false);

    for (auto& sp : entry.success) {
      std::vector<int> positions = term_vars(sp);
      bool touches_bound = false;
      for (int p : positions)
        if (std::find(desc.binds.begin(), desc.binds.end(), p) != desc.binds.end())
          touches_bound = true;
      if (!touches_bound) {
        if (positions.empty()) continue;
        TermPtr inst = subst_vars(sp, args);
        if (!refine(out, inst, args[positions[0]])) return mk_bot(n);
      } else {
        for (int p : positions)
          if (std::find(desc.binds.begin(), desc.binds.end(), p) != desc.binds.end()) {
            M v = abstract_prop(sp);
            bound_state[p] = has_bound[p] ? m_glb(bound_state[p], v) : v;
            has_bound[p] = true;
          }
      }
    }

    bool any_bound = false;
    M worst = M::Var;
    for (size_t i = 0; i < args.size(); ++i) {
      if (!has_bound[i]) continue;
      any_bound = true;
      M s = bound_state[i];
      worst = worst == M::Var ? s : (s == M::Ground && worst == M::Ground ? M::Ground : M::Any);
      const TermPtr& t = args[i];
      if (t->is_var()) {
        out[t->var] = m_unify(out[t->var], s);
        if (out[t->var] == M::Bot) return mk_bot(n);
      } else {
        for (int v : term_vars(t))
          out[v] = s == M::Ground ? m_unify(out[v], M::Ground) : demote_gen(out[v]);
      }
    }
    if (any_bound) {
      std::vector<int> direct;
      for (size_t i = 0; i < args.size(); ++i)
        if (has_bound[i])
          for (int v : term_vars(args[i])) direct.push_back(v);
      for (int v = 0; v < n; ++v)
        if (std::find(direct.begin(), direct.end(), v) == direct.end())
          out[v] = demote_inst(out[v], worst);
    }
    return mk(std::move(out));
  }

  // --- projections ---

  AsubPtr project(const Asub& a, const std::vector<int>& keep) const override {
    const auto& x = cast(a);
    if (x.bot) return mk_bot((int)keep.size());
    std::vector<M> out;
    out.reserve(keep.size());
    for (int v : keep) out.push_back(x.vals[v]);
    return mk(std::move(out));
  }

  AsubPtr join_disjoint(const Asub& a, const Asub& b) const override {
    const auto& x = cast(a);
    const auto& y = cast(b);
    if (x.bot || y.bot) return mk_bot((int)(x.vals.size() + y.vals.size()));
    std::vector<M> out = x.vals;
    out.insert(out.end(), y.vals.begin(), y.vals.end());
    return mk(std::move(out));
  }

  // --- properties ---

  std::vector<TermPtr> to_properties(const Asub& a,
                                     const std::vector<TermPtr>& var_terms) const override {
    const auto& x = cast(a);
    std::vector<TermPtr> out;
    if (x.bot) {
      out.push_back(Term::mk_atom("unreachable"));
      return out;
    }
    for (size_t v = 0; v < x.vals.size(); ++v) {
      const TermPtr& vt = var_terms[v];
      switch (x.vals[v]) {
        case M::Ground: out.push_back(Term::mk_comp("ground", {vt})); break;
        case M::Var: out.push_back(Term::mk_comp("var", {vt})); break;
        case M::Nonvar: out.push_back(Term::mk_comp("nonvar", {vt})); break;
        case M::Nonground: out.push_back(Term::mk_comp("nonground", {vt})); break;
        case M::Ngv:
          out.push_back(Term::mk_comp("nonground", {vt}));
          out.push_back(Term::mk_comp("nonvar", {vt}));
          break;
        case M::Any: out.push_back(Term::mk_comp("any", {vt})); break;
        case M::Bot: break;
      }
    }
    return out;
  }

  bool gamma_member(const std::vector<TermPtr>& binding, const Asub& a) const override {
    const auto& x = cast(a);
    if (x.bot) return false;
    for (size_t v = 0; v < x.vals.size(); ++v) {
      const TermPtr& t = binding[v];
      switch (x.vals[v]) {
        case M::Ground:
          if (!is_ground_term(t)) return false;
          break;
        case M::Var:
          if (!t->is_var()) return false;
          break;
        case M::Nonvar:
          if (t->is_var()) return false;
          break;
        case M::Nonground:
          if (is_ground_term(t)) return false;
          break;
        case M::Ngv:
          if (t->is_var() || is_ground_term(t)) return false;
          break;
        case M::Any: break;
        case M::Bot: return false;
      }
    }
    return true;
  }

  AsubPtr abstract_props(const std::vector<TermPtr>& props, int nvars) const override {
    std::vector<M> out(nvars, M::Any);
    for (auto& p : props) {
      if (!p->is_comp()) continue;
      // the argument a property constrains: first for instance/2, last otherwise
      TermPtr target =
          p->name == "instance" && p->arity() == 2 ? p->args[0] : p->args.back();
      if (target->is_var()) {
        int v = target->var;
        out[v] = m_glb(out[v], abstract_prop(p));
        if (out[v] == M::Bot) return mk_bot(nvars);
      } else if (abstract_prop(p) == M::Ground) {
        for (int v : term_vars(target)) {
          out[v] = m_glb(out[v], M::Ground);
          if (out[v] == M::Bot) return mk_bot(nvars);
        }
      }
    }
    return mk(std::move(out));
  }

  Entail entails(const TermPtr& prop, const Asub& a) const override {
    const auto& x = cast(a);
    if (x.bot) return Entail::Yes;
    const std::string& f = prop->name;
    int n = prop->arity();
    if (f == "any") return Entail::Yes;
    if (n >= 1) {
      const TermPtr& t = prop->args.back();
      M s = eval(t, x.vals);
      if (f == "ground") {
        if (s == M::Ground) return Entail::Yes;
        if (nonground_now(s)) return Entail::No;
        return Entail::Maybe;
      }
      if (f == "var") {
        if (s == M::Var) return Entail::Yes;
        if (s == M::Ground || s == M::Nonvar || s == M::Ngv) return Entail::No;
        return Entail::Maybe;
      }
      if (f == "nonvar") {
        if (s == M::Ground || s == M::Nonvar || s == M::Ngv) return Entail::Yes;
        if (s == M::Var) return Entail::No;
        return Entail::Maybe;
      }
      if (f == "nonground") {
        if (nonground_now(s)) return Entail::Yes;
        if (s == M::Ground) return Entail::No;
        return Entail::Maybe;
      }
      if (f == "ngv") {
        if (s == M::Ngv) return Entail::Yes;
        if (s == M::Ground || s == M::Var) return Entail::No;
        return Entail::Maybe;
      }
      if (f == "num") {
        if (t->is_num()) return Entail::Yes;
        if (t->is_atom() || t->is_comp()) return Entail::No;
        if (s == M::Var) return Entail::No;
        return Entail::Maybe;
      }
      if (f == "atom") {
        if (t->is_atom()) return Entail::Yes;
        if (t->is_num() || t->is_comp()) return Entail::No;
        if (s == M::Var) return Entail::No;
        return Entail::Maybe;
      }
      if (f == "list" && n == 1) {
        if (t->is_num()) return Entail::No;
        if (t->is_atom()) return t->name == "[]" ? Entail::Yes : Entail::No;
        if (t->is_var()) return s == M::Var ? Entail::No : Entail::Maybe;
        if (t->is_comp() && t->name != ".") return Entail::No;
        return Entail::Maybe;
      }
    }
    return Entail::Maybe;
  }
};

}  // namespace

const Domain* modes_domain() {
  static ModesDomain d;
  return &d;
}

}  // namespace mlp
