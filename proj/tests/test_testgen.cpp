#include <set>

#include "doctest.h"
#include "mlp/modes_expand.hpp"
#include "mlp/parser.hpp"
#include "mlp/props.hpp"
#include "mlp/store.hpp"
#include "mlp/testgen.hpp"

using namespace mlp;

namespace {

GenSpec spec_for(const std::string& entry_src, const Universe& u = Universe{}) {
  Program p = expand_modes(parse_program(entry_src + "\n" + "dummy.\n"));
  for (auto& a : p.assertions)
    if (a.status == AStatus::Entry) return spec_from_entry(a, u);
  throw std::runtime_error("no entry");
}

int term_size(const TermPtr& t) {
  int s = 1;
  if (t->is_comp())
    for (auto& a : t->args) s += term_size(a);
  return s;
}

// evaluates the entry Calls conjunction against a generated goal
bool satisfies(const GenSpec& spec, const TermPtr& goal, int nvars) {
  Store store;
  int base = store.fresh(nvars);
  for (int i = 0; i < spec.arity; ++i) {
    for (auto& prop : spec.arg_props[i]) {
      // prop's last arg is the position var; rebuild over the actual arg
      std::vector<TermPtr> args = prop->args;
      args.back() = goal->args[i];
      TermPtr inst = Term::mk_comp(prop->name, std::move(args));
      if (eval_check({inst}, base, store) != nullptr) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("breadth-first list enumeration starts [], [_], ...") {
  Program p = expand_modes(parse_program(":- entry q(+list).\nq(_).\n"));
  GenSpec spec = spec_from_entry(p.assertions[0], Universe{});
  Generator gen(spec, GenStrategy::BreadthFirst, 0);
  int nv = 0;
  auto g0 = gen.next(&nv);
  REQUIRE(g0);
  CHECK(term_to_string((*g0)->args[0]) == "[]");
  auto g1 = gen.next(&nv);
  REQUIRE(g1);
  CHECK(term_to_string((*g1)->args[0]) == "[G0]");
  // every list of size s appears before any of size s+1; [_,_] shows up
  int last_size = 0;
  bool seen_two_elem = false;
  Generator gen2(spec, GenStrategy::BreadthFirst, 0);
  for (int i = 0; i < 400; ++i) {
    auto g = gen2.next(&nv);
    REQUIRE(g);
    int s = term_size((*g)->args[0]);
    CHECK(s >= last_size);
    last_size = std::max(last_size, s);
    std::vector<TermPtr> elems;
    if (list_elements((*g)->args[0], elems) && elems.size() == 2 && elems[0]->is_var() &&
        elems[1]->is_var())
      seen_two_elem = true;
  }
  CHECK(seen_two_elem);
}

TEST_CASE("breadth-first numeric range enumerates exhaustively in order") {
  Universe u;
  u.int_min = 0;
  u.int_max = 3;
  GenSpec spec = spec_for(":- entry r(+num).", u);
  Generator gen(spec, GenStrategy::BreadthFirst, 0);
  int nv = 0;
  for (long long want = 0; want <= 3; ++want) {
    auto g = gen.next(&nv);
    REQUIRE(g);
    CHECK((*g)->args[0]->num == want);
  }
  // the bounded universe for +num is exhausted after the range
  CHECK(!gen.next(&nv).has_value());
}

TEST_CASE("prepend goals: list second argument, fresh var third") {
  GenSpec spec = spec_for(":- entry prepend(_,+list,-).");
  Generator gen(spec, GenStrategy::Random, 42);
  int nv = 0;
  for (int i = 0; i < 200; ++i) {
    auto g = gen.next(&nv);
    REQUIRE(g);
    CHECK(is_proper_list((*g)->args[1]));
    CHECK((*g)->args[2]->is_var());
  }
}

TEST_CASE("random generation is reproducible from the seed") {
  GenSpec spec = spec_for(":- entry p(_,+list(num),-).");
  for (uint64_t seed : {1ull, 7ull, 123456789ull}) {
    Generator a(spec, GenStrategy::Random, seed);
    Generator b(spec, GenStrategy::Random, seed);
    int nva = 0, nvb = 0;
    for (int i = 0; i < 50; ++i) {
      auto ga = a.next(&nva);
      auto gb = b.next(&nvb);
      REQUIRE(ga);
      REQUIRE(gb);
      CHECK(struct_eq(*ga, *gb));
    }
  }
}

TEST_CASE("generator soundness: goals satisfy their generating conjunction") {
  const char* entries[] = {
      ":- entry a(+list).",
      ":- entry b(+list(num)).",
      ":- entry c(+num,+atom).",
      ":- entry d(-,+ground).",
      ":- entry e(_,+list(atom),-).",
      ":- entry f(+list(list(num))).",
  };
  for (auto* e : entries) {
    CAPTURE(e);
    GenSpec spec = spec_for(e);
    Generator gen(spec, GenStrategy::Random, 777);
    int nv = 0;
    for (int i = 0; i < 300; ++i) {
      auto g = gen.next(&nv);
      REQUIRE(g);
      if (!satisfies(spec, *g, nv)) {
        CAPTURE(term_to_string(*g));
        REQUIRE(false);
      }
    }
  }
}

TEST_CASE("generated inputs reuse variables (sharing exercise)") {
  GenSpec spec = spec_for(":- entry p(_,_,_).");
  Generator gen(spec, GenStrategy::Random, 5);
  int nv = 0;
  bool found_shared = false;
  for (int i = 0; i < 400 && !found_shared; ++i) {
    auto g = gen.next(&nv);
    REQUIRE(g);
    std::map<int, int> counts;
    std::function<void(const TermPtr&)> walk = [&](const TermPtr& t) {
      if (t->is_var()) counts[t->var]++;
      if (t->is_comp())
        for (auto& a : t->args) walk(a);
    };
    walk(*g);
    for (auto& [v, n] : counts)
      if (n > 1) found_shared = true;
  }
  CHECK(found_shared);
}

TEST_CASE("unsupported property raises NoGenerator") {
  Program p = parse_program(":- entry p(X) : mshare([[X]]).\np(_).\n");
  CHECK_THROWS_AS(spec_from_entry(p.assertions[0], Universe{}), NoGenerator);
}

TEST_CASE("shrinking examples") {
  // already-minimal goal shrinks to itself
  int nv = 0;
  TermPtr g = parse_goal("p(a)", &nv);
  auto always = [](const TermPtr&, int) { return true; };
  auto never = [](const TermPtr&, int) { return false; };
  int out_nv = 0;
  TermPtr s = shrink_goal(g, nv, never, &out_nv);
  CHECK(struct_eq(s, g));

  // a goal failing for every instance shrinks to the all-fresh skeleton
  g = parse_goal("p(f(g(h)),[a,b,c],V)", &nv);
  s = shrink_goal(g, nv, always, &out_nv);
  REQUIRE(s->is_comp());
  for (auto& a : s->args) CHECK(a->is_var());

  // groundness-driven failure: shrinks to a small ground witness
  g = parse_goal("p(f(g(h)),[1,2,3])", &nv);
  auto ground_fails = [](const TermPtr& goal, int) {
    return is_ground_term(goal->args[0]) && is_ground_term(goal->args[1]);
  };
  s = shrink_goal(g, nv, ground_fails, &out_nv);
  CHECK(ground_fails(s, out_nv));
  // locally minimal: still-ground but as small as the moves allow
  CHECK(term_size(s) <= 5);
  CHECK(term_to_string(s->args[1]) == "[]");
}

TEST_CASE("shrunk result is locally minimal under the shrink moves") {
  int nv = 0;
  TermPtr g = parse_goal("p([1,2,3],f(4))", &nv);
  // fails while the first list has >= 2 elements
  auto fails = [](const TermPtr& goal, int) {
    std::vector<TermPtr> elems;
    return list_elements(goal->args[0], elems) && elems.size() >= 2;
  };
  int out_nv = 0;
  TermPtr s = shrink_goal(g, nv, fails, &out_nv);
  REQUIRE(fails(s, out_nv));
  std::vector<TermPtr> elems;
  list_elements(s->args[0], elems);
  CHECK(elems.size() == 2);  // dropping one more element stops the failure
  // every single shrink move breaks the predicate
  CHECK(s->args[1]->is_var());
}

TEST_CASE("universe override parsing") {
  setenv("MLP_UNIVERSE", "atoms=x,y;int=-1..1;len=3;depth=2", 1);
  Universe u = universe_from_env();
  CHECK(u.atoms == std::vector<std::string>{"x", "y"});
  CHECK(u.int_min == -1);
  CHECK(u.int_max == 1);
  CHECK(u.max_list_len == 3);
  CHECK(u.max_depth == 2);
  unsetenv("MLP_UNIVERSE");
}
