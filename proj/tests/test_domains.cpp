#include <functional>
#include <map>
#include <set>

#include "doctest.h"
#include "mlp/domain.hpp"
#include "mlp/parser.hpp"
#include "mlp/props.hpp"
#include "mlp/rng.hpp"
#include "mlp/store.hpp"

using namespace mlp;

namespace {

TermPtr V(int i, const char* n = nullptr) {
  return Term::mk_var(i, n ? n : ("V" + std::to_string(i)));
}

std::vector<TermPtr> var_terms(int n) {
  std::vector<TermPtr> out;
  for (int i = 0; i < n; ++i) out.push_back(V(i));
  return out;
}

TermPtr lst(std::vector<TermPtr> ts) {
  TermPtr l = Term::nil();
  for (auto it = ts.rbegin(); it != ts.rend(); ++it) l = Term::cons(*it, l);
  return l;
}

// random concrete term over a tiny universe; runtime vars drawn from pool
TermPtr random_term(Rng& rng, int depth, std::vector<int>& var_pool, int& next_var) {
  int pick = (int)rng.below(depth >= 2 ? 4 : 6);
  switch (pick) {
    case 0: return Term::mk_atom(rng.chance(0.5) ? "a" : "b");
    case 1: return Term::mk_num((long long)rng.range(-2, 2));
    case 2:
    case 3: {
      // runtime variable; reuse with probability 1/2
      if (!var_pool.empty() && rng.chance(0.5))
        return Term::mk_var(var_pool[rng.below(var_pool.size())]);
      int id = next_var++;
      var_pool.push_back(id);
      return Term::mk_var(id);
    }
    case 4: return Term::mk_comp("f", {random_term(rng, depth + 1, var_pool, next_var)});
    default:
      return Term::mk_comp("g", {random_term(rng, depth + 1, var_pool, next_var),
                                 random_term(rng, depth + 1, var_pool, next_var)});
  }
}

// random clause-shaped term over clause vars 0..n-1 for unification inputs
TermPtr random_clause_term(Rng& rng, int nvars, int depth) {
  int pick = (int)rng.below(depth >= 2 ? 3 : 5);
  switch (pick) {
    case 0: return Term::mk_atom("a");
    case 1: return Term::mk_num((long long)rng.range(-1, 1));
    case 2: return V((int)rng.below(nvars));
    case 3: return Term::mk_comp("f", {random_clause_term(rng, nvars, depth + 1)});
    default:
      return Term::mk_comp("g", {random_clause_term(rng, nvars, depth + 1),
                                 random_clause_term(rng, nvars, depth + 1)});
  }
}

// concrete unification of already-resolved terms (test-local oracle,
// independent of Store and of the domains)
bool oracle_unify(const TermPtr& a, const TermPtr& b, std::map<int, TermPtr>& s);

TermPtr oracle_walk(TermPtr t, const std::map<int, TermPtr>& s) {
  while (t->is_var()) {
    auto it = s.find(t->var);
    if (it == s.end()) return t;
    t = it->second;
  }
  return t;
}

TermPtr oracle_resolve(const TermPtr& t, const std::map<int, TermPtr>& s) {
  TermPtr w = oracle_walk(t, s);
  if (w->is_comp()) {
    std::vector<TermPtr> args;
    for (auto& a : w->args) args.push_back(oracle_resolve(a, s));
    return Term::mk_comp(w->name, std::move(args));
  }
  return w;
}

bool oracle_occurs(int v, const TermPtr& t, const std::map<int, TermPtr>& s) {
  TermPtr w = oracle_walk(t, s);
  if (w->is_var()) return w->var == v;
  if (w->is_comp())
    for (auto& a : w->args)
      if (oracle_occurs(v, a, s)) return true;
  return false;
}

bool oracle_unify(const TermPtr& a0, const TermPtr& b0, std::map<int, TermPtr>& s) {
  TermPtr a = oracle_walk(a0, s);
  TermPtr b = oracle_walk(b0, s);
  if (a->is_var() && b->is_var() && a->var == b->var) return true;
  if (a->is_var()) {
    if (oracle_occurs(a->var, b, s)) return false;
    s[a->var] = b;
    return true;
  }
  if (b->is_var()) {
    if (oracle_occurs(b->var, a, s)) return false;
    s[b->var] = a;
    return true;
  }
  if (a->kind != b->kind) return false;
  if (a->is_atom()) return a->name == b->name;
  if (a->is_num()) return a->num == b->num;
  if (a->name != b->name || a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!oracle_unify(a->args[i], b->args[i], s)) return false;
  return true;
}

// Random binding in gamma(asub) by rejection sampling.
bool sample_gamma(Rng& rng, const Domain& d, const Asub& a, int nvars,
                  std::vector<TermPtr>& out, int tries = 300) {
  for (int i = 0; i < tries; ++i) {
    std::vector<int> pool;
    int next = 1000;
    out.clear();
    for (int v = 0; v < nvars; ++v) out.push_back(random_term(rng, 0, pool, next));
    if (d.gamma_member(out, a)) return true;
  }
  return false;
}

struct LawStats {
  int checked = 0;
};

// lattice laws on an enumerated carrier
void check_lattice_laws(const Domain& d, const std::vector<AsubPtr>& carrier) {
  for (auto& a : carrier) {
    CHECK(d.leq(*a, *a));
    CHECK(d.equal(*d.lub(*a, *a), *a));
    CHECK(d.equal(*d.glb(*a, *a), *a));
  }
  for (auto& a : carrier)
    for (auto& b : carrier) {
      AsubPtr ab = d.lub(*a, *b);
      AsubPtr ba = d.lub(*b, *a);
      CHECK(d.equal(*ab, *ba));
      AsubPtr gab = d.glb(*a, *b);
      CHECK(d.equal(*gab, *d.glb(*b, *a)));
      // lub is an upper bound, glb a lower bound
      CHECK(d.leq(*a, *ab));
      CHECK(d.leq(*b, *ab));
      CHECK(d.leq(*gab, *a));
      CHECK(d.leq(*gab, *b));
      // absorption
      CHECK(d.equal(*d.lub(*a, *d.glb(*a, *b)), *a));
      CHECK(d.equal(*d.glb(*a, *d.lub(*a, *b)), *a));
      // leq antisymmetry
      if (d.leq(*a, *b) && d.leq(*b, *a)) CHECK(d.equal(*a, *b));
    }
  // associativity + least/greatest among bounds on a subsample
  for (size_t i = 0; i < carrier.size(); i += 3)
    for (size_t j = 1; j < carrier.size(); j += 3)
      for (size_t k = 2; k < carrier.size(); k += 3) {
        const Asub &a = *carrier[i], &b = *carrier[j], &c = *carrier[k];
        CHECK(d.equal(*d.lub(*d.lub(a, b), c), *d.lub(a, *d.lub(b, c))));
        CHECK(d.equal(*d.glb(*d.glb(a, b), c), *d.glb(a, *d.glb(b, c))));
      }
  // lub minimality / glb maximality by scan
  for (auto& a : carrier)
    for (auto& b : carrier) {
      AsubPtr join = d.lub(*a, *b);
      AsubPtr meet = d.glb(*a, *b);
      for (auto& c : carrier) {
        if (d.leq(*a, *c) && d.leq(*b, *c)) CHECK(d.leq(*join, *c));
        if (d.leq(*c, *a) && d.leq(*c, *b)) CHECK(d.leq(*c, *meet));
      }
    }
}

}  // namespace

TEST_CASE("modes lattice laws, exhaustive over 2-var carriers") {
  const Domain& d = *get_domain("modes");
  std::vector<AsubPtr> carrier;
  // all single-var elements: 7 values via abstract_props is awkward; use
  // lub/glb generators from a seed set instead
  std::vector<TermPtr> props;
  auto add = [&](std::vector<TermPtr> ps) { carrier.push_back(d.abstract_props(ps, 1)); };
  add({});                                        // any
  add({Term::mk_comp("ground", {V(0)})});         // ground
  add({Term::mk_comp("var", {V(0)})});            // var
  add({Term::mk_comp("nonvar", {V(0)})});         // nonvar
  add({Term::mk_comp("nonground", {V(0)})});      // nonground
  add({Term::mk_comp("nonground", {V(0)}), Term::mk_comp("nonvar", {V(0)})});  // ngv
  carrier.push_back(d.bottom(1));
  REQUIRE(carrier.size() == 7);
  check_lattice_laws(d, carrier);
}

TEST_CASE("modes lub matches the brute-force minimal upper bound") {
  const Domain& d = *get_domain("modes");
  auto mk = [&](const char* p) -> AsubPtr {
    if (std::string(p) == "bottom") return d.bottom(1);
    if (std::string(p) == "any") return d.abstract_props({}, 1);
    if (std::string(p) == "ngv")
      return d.abstract_props(
          {Term::mk_comp("nonground", {V(0)}), Term::mk_comp("nonvar", {V(0)})}, 1);
    return d.abstract_props({Term::mk_comp(p, {V(0)})}, 1);
  };
  // the three pinned examples
  CHECK(d.equal(*d.lub(*mk("ground"), *mk("var")), *mk("any")));
  CHECK(d.equal(*d.lub(*mk("ground"), *mk("ngv")), *mk("nonvar")));
  CHECK(d.equal(*d.lub(*mk("var"), *mk("ngv")), *mk("nonground")));
  CHECK(d.equal(*d.glb(*mk("nonvar"), *mk("nonground")), *mk("ngv")));
}

TEST_CASE("modes abstract_unify spec examples") {
  const Domain& d = *get_domain("modes");
  // vars: X=0(any), Rest=1(var), Ys=2(var); unify(Ys, [X|Rest]) -> Ys ngv
  AsubPtr a = d.abstract_props({Term::mk_comp("var", {V(1)}), Term::mk_comp("var", {V(2)})}, 3);
  AsubPtr r = d.abstract_unify(V(2), Term::cons(V(0), V(1)), *a);
  auto props = d.to_properties(*r, var_terms(3));
  // Ys is nonvar and (right now) nonground; crucially not claimed ground
  std::string s = terms_to_string(props);
  CHECK(s.find("nonvar(V2)") != std::string::npos);
  // unify(a, b) clashes
  CHECK(d.is_bottom(*d.abstract_unify(Term::mk_atom("a"), Term::mk_atom("b"), *a)));
  // unify(X, Y) with X ground makes Y ground
  AsubPtr g = d.abstract_props({Term::mk_comp("ground", {V(0)})}, 2);
  AsubPtr r2 = d.abstract_unify(V(0), V(1), *g);
  CHECK(d.entails(Term::mk_comp("ground", {V(1)}), *r2) == Entail::Yes);
}

TEST_CASE("modes aliasing demotion: binding a shared free var drops stale claims") {
  const Domain& d = *get_domain("modes");
  // X=0: ngv, Rest=1: var, Xs=2: nonvar; after Rest=Xs the ngv claim on X
  // must weaken to nonvar (X may contain Rest)
  AsubPtr a = d.abstract_props({Term::mk_comp("nonground", {V(0)}), Term::mk_comp("nonvar", {V(0)}),
                                Term::mk_comp("var", {V(1)}), Term::mk_comp("nonvar", {V(2)})},
                               3);
  AsubPtr r = d.abstract_unify(V(1), V(2), *a);
  CHECK(d.entails(Term::mk_comp("nonvar", {V(0)}), *r) == Entail::Yes);
  CHECK(d.entails(Term::mk_comp("nonground", {V(0)}), *r) == Entail::Maybe);
}

TEST_CASE("sharing abstract_unify spec examples") {
  const Domain& d = *get_domain("shfr");
  // discrete {{X},{Y}}, both free: unify(X, f(Y)) -> {{X,Y}}, X loses
  // freeness, Y keeps it
  AsubPtr a = d.fresh(2);
  AsubPtr r = d.abstract_unify(V(0), Term::mk_comp("f", {V(1)}), *a);
  auto props = d.to_properties(*r, {V(0, "X"), V(1, "Y")});
  std::string s = terms_to_string(props);
  CHECK(s.find("mshare([[X,Y]])") != std::string::npos);
  CHECK(s.find("var(Y)") != std::string::npos);
  CHECK(s.find("var(X)") == std::string::npos);

  // unify(X, a): groups containing X dropped; X ground
  AsubPtr r2 = d.abstract_unify(V(0), Term::mk_atom("a"), *a);
  auto props2 = d.to_properties(*r2, {V(0, "X"), V(1, "Y")});
  std::string s2 = terms_to_string(props2);
  CHECK(s2.find("ground([X])") != std::string::npos);
  CHECK(s2.find("mshare([[Y]])") != std::string::npos);
}

TEST_CASE("sharing gamma: missing sharing group rejects the binding") {
  const Domain& d = *get_domain("sharing");
  // sharing {{X},{Y}} but binding X=f(U), Y=g(U)
  AsubPtr a = d.fresh(2);
  TermPtr u = Term::mk_var(100);
  std::vector<TermPtr> binding = {Term::mk_comp("f", {u}), Term::mk_comp("g", {u})};
  CHECK_FALSE(d.gamma_member(binding, *a));
  std::vector<TermPtr> ok = {Term::mk_comp("f", {Term::mk_var(100)}),
                             Term::mk_comp("g", {Term::mk_var(101)})};
  CHECK(d.gamma_member(ok, *a));
}

TEST_CASE("share_clique compacts a powerset into a clique (to_properties)") {
  const Domain& d = *get_domain("share_clique");
  // build full powerset over {X,Y,Z} plus {W} by lubbing crafted asubs:
  // entry over 4 untyped vars gives the powerset over all four; instead
  // construct via abstract_props with no constraints on X,Y,Z and ground W,
  // then re-add W as independent.
  // Simpler: unconstrained 3-var entry has the powerset {X,Y,Z}; join a
  // fresh W.
  AsubPtr xyz = d.abstract_props({}, 3);
  AsubPtr w = d.fresh(1);
  AsubPtr joined = d.join_disjoint(*xyz, *w);
  auto props = d.to_properties(*joined, {V(0, "X"), V(1, "Y"), V(2, "Z"), V(3, "W")});
  std::string s = terms_to_string(props);
  CHECK(s.find("clique([X,Y,Z])") != std::string::npos);
  CHECK(s.find("mshare([[W]])") != std::string::npos);
}

TEST_CASE("depthk glb examples and exhaustive lattice check (k=2, tiny signature)") {
  const Domain& d = *get_domain("depthk");
  int nv = 0;
  auto pat = [&](const char* txt) {
    nv = 0;
    return parse_goal(txt, &nv);
  };
  // glb(X -> f(_), X -> f(a)) = X -> f(a)
  AsubPtr a1 = d.abstract_props({Term::mk_comp("instance", {V(0), pat("f(_)")})}, 1);
  AsubPtr a2 = d.abstract_props({Term::mk_comp("instance", {V(0), pat("f(a)")})}, 1);
  AsubPtr m = d.glb(*a1, *a2);
  CHECK(d.equal(*m, *a2));
  // glb(X -> f(a), X -> g(_)) = bottom
  AsubPtr a3 = d.abstract_props({Term::mk_comp("instance", {V(0), pat("g(_)")})}, 1);
  CHECK(d.is_bottom(*d.glb(*a2, *a3)));

  // enumerate all patterns of depth <= 2 over {a, f/1} and check laws +
  // glb maximality against brute force
  std::vector<AsubPtr> carrier;
  std::vector<const char*> pats = {"f(f(_))", "f(f(a))", "f(_)", "f(a)", "a"};
  carrier.push_back(d.top(1));
  for (auto* p : pats)
    carrier.push_back(d.abstract_props({Term::mk_comp("instance", {V(0), pat(p)})}, 1));
  carrier.push_back(d.bottom(1));
  check_lattice_laws(d, carrier);
}

TEST_CASE("amgu local soundness (randomized gamma containment)") {
  // for each domain: theta in gamma(a), concrete unification of t1 theta,
  // t2 theta succeeds => theta' in gamma(abstract_unify(t1,t2,a))
  for (const char* dn : {"modes", "sharing", "shfr", "share_clique", "depthk"}) {
    std::string dom_name = dn; CAPTURE(dom_name);
    const Domain& d = *get_domain(dn);
    Rng rng(std::string(dn)[0] + 1234u);
    const int nvars = 3;
    int cases = 0;
    int target = 2600;  // x4 domains > 1e4 total
    while (cases < target) {
      // random start asub built from a random gamma sample's abstraction:
      // use abstract_props over a random subset to vary shapes
      std::vector<TermPtr> props;
      for (int v = 0; v < nvars; ++v) {
        switch (rng.below(4)) {
          case 0: props.push_back(Term::mk_comp("ground", {V(v)})); break;
          case 1: props.push_back(Term::mk_comp("var", {V(v)})); break;
          default: break;  // unconstrained
        }
      }
      AsubPtr a;
      try {
        a = d.abstract_props(props, nvars);
      } catch (const DomainError&) {
        continue;
      }
      std::vector<TermPtr> theta;
      if (!sample_gamma(rng, d, *a, nvars, theta, 60)) continue;

      TermPtr t1 = random_clause_term(rng, nvars, 0);
      TermPtr t2 = random_clause_term(rng, nvars, 0);

      // concrete side: substitute theta, unify
      std::map<int, TermPtr> sub;
      TermPtr t1i = subst_vars(t1, theta);
      TermPtr t2i = subst_vars(t2, theta);
      if (!oracle_unify(t1i, t2i, sub)) continue;
      std::vector<TermPtr> theta2;
      for (int v = 0; v < nvars; ++v) theta2.push_back(oracle_resolve(theta[v], sub));

      AsubPtr r = d.abstract_unify(t1, t2, *a);
      bool member = d.gamma_member(theta2, *r);
      if (!member) {
        FAIL("amgu soundness violation in " << dom_name << "\n  theta = "
             << terms_to_string(theta) << "\n  t1 = " << term_to_string(t1)
             << "\n  t2 = " << term_to_string(t2) << "\n  a = " << a->to_string()
             << "\n  r = " << r->to_string() << "\n  theta' = " << terms_to_string(theta2));
      }
      cases++;
    }
  }
}

TEST_CASE("to_properties agrees with gamma_member (soundness direction)") {
  for (const char* dn : {"modes", "sharing", "shfr", "share_clique", "depthk"}) {
    std::string dom_name = dn; CAPTURE(dom_name);
    const Domain& d = *get_domain(dn);
    Rng rng(std::string(dn)[1] + 99u);
    const int nvars = 3;
    int cases = 0;
    while (cases < 800) {
      std::vector<TermPtr> props;
      for (int v = 0; v < nvars; ++v) {
        switch (rng.below(4)) {
          case 0: props.push_back(Term::mk_comp("ground", {V(v)})); break;
          case 1: props.push_back(Term::mk_comp("var", {V(v)})); break;
          default: break;
        }
      }
      AsubPtr a0;
      try {
        a0 = d.abstract_props(props, nvars);
      } catch (const DomainError&) {
        continue;
      }
      // push the asub through a random unification to diversify it
      AsubPtr a = d.abstract_unify(random_clause_term(rng, nvars, 0),
                                   random_clause_term(rng, nvars, 0), *a0);
      if (d.is_bottom(*a)) continue;
      std::vector<TermPtr> theta;
      if (!sample_gamma(rng, d, *a, nvars, theta, 60)) continue;

      // gamma_member(theta, a) => eval_check(to_properties(a), theta) passes
      std::vector<TermPtr> conj = d.to_properties(*a, var_terms(nvars));
      // pattern wildcards may introduce fresh assertion vars beyond nvars
      int conj_vars = nvars;
      for (auto& c : conj)
        for (int u : term_vars(c)) conj_vars = std::max(conj_vars, u + 1);
      Store store;
      int base = store.fresh(conj_vars);
      int max_rt = 0;
      for (auto& t : theta)
        for (int u : term_vars(t)) max_rt = std::max(max_rt, u + 1);
      int rbase = store.fresh(max_rt);
      for (int v = 0; v < nvars; ++v) {
        REQUIRE(store.unify({Term::mk_var(v), base}, {theta[v], rbase}));
      }
      TermPtr failing = eval_check(conj, base, store);
      if (failing) {
        CAPTURE(a->to_string());
        CAPTURE(terms_to_string(theta));
        CAPTURE(terms_to_string(conj));
        CAPTURE(term_to_string(failing));
      }
      REQUIRE(failing == nullptr);
      cases++;
    }
  }
}

TEST_CASE("sharing lattice laws over 2 variables (exhaustive sharing sets)") {
  const Domain& d = *get_domain("sharing");
  // enumerate all sharing sets over {X,Y}: subsets of {{X},{Y},{X,Y}}
  std::vector<AsubPtr> carrier;
  carrier.push_back(d.bottom(2));
  // build via lubs of primitive one-group asubs obtained from unifications
  AsubPtr discrete = d.fresh(2);                 // {{X},{Y}}
  AsubPtr merged = d.abstract_unify(V(0), V(1), *discrete);  // {{X,Y}}
  AsubPtr ground = d.abstract_unify(V(0), Term::mk_atom("a"),
                                    *d.abstract_unify(V(1), Term::mk_atom("b"), *discrete));
  AsubPtr xonly = d.abstract_unify(V(1), Term::mk_atom("b"), *discrete);
  AsubPtr yonly = d.abstract_unify(V(0), Term::mk_atom("a"), *discrete);
  std::vector<AsubPtr> seeds = {discrete, merged, ground, xonly, yonly};
  for (auto& s : seeds) carrier.push_back(s);
  // close under lub to get more of the carrier
  for (size_t i = 0; i < seeds.size(); ++i)
    for (size_t j = i + 1; j < seeds.size(); ++j) carrier.push_back(d.lub(*seeds[i], *seeds[j]));
  check_lattice_laws(d, carrier);
}

TEST_CASE("project and join_disjoint round trip") {
  for (const char* dn : {"modes", "sharing", "shfr", "depthk"}) {
    const Domain& d = *get_domain(dn);
    AsubPtr a = d.abstract_props({Term::mk_comp("ground", {V(0)}), Term::mk_comp("var", {V(1)})},
                                 2);
    AsubPtr b = d.abstract_props({Term::mk_comp("var", {V(0)})}, 1);
    AsubPtr j = d.join_disjoint(*a, *b);
    CHECK(d.num_vars(*j) == 3);
    AsubPtr back = d.project(*j, {0, 1});
    CHECK(d.equal(*back, *a));
    AsubPtr right = d.project(*j, {2});
    CHECK(d.equal(*right, *b));
  }
}
