#include <set>

#include "doctest.h"
#include "mlp/interp.hpp"
#include "mlp/parser.hpp"
#include "mlp/props.hpp"
#include "mlp/rng.hpp"

using namespace mlp;

namespace {

const char* kAppend =
    "append([],X,X).\n"
    "append([X|Xs],Ys,[X|Zs]) :- append(Xs,Ys,Zs).\n";

const char* kPrepend =
    "prepend(X,Xs,Ys) :-\n"
    "    Ys=[X|Rest],\n"
    "    Rest=Xs.\n";

// The instrumented prepend program of the running example, with the buggy
// nonground claim at the last two points.
const char* kPrependChecked =
    "prepend(X,Xs,Ys) :-\n"
    "    check(any(X), nonvar(Xs), var(Ys), var(Rest)),\n"
    "    Ys=[X|Rest],\n"
    "    check(any(X), nonvar(Xs), nonground(Ys), nonvar(Ys), var(Rest)),\n"
    "    Rest=Xs,\n"
    "    check(any(X), nonvar(Xs), nonground(Ys), nonvar(Ys), nonvar(Rest)).\n";

RunOutcome run(const std::string& prog_src, const std::string& goal_src,
               Budget b = Budget{}, bool checks = false) {
  Program p = parse_program(prog_src);
  int nv = 0;
  TermPtr g = parse_goal(goal_src, &nv);
  return solve(p, g, nv, b, checks);
}

std::string solution_str(const RunOutcome& out, size_t i, const std::string& var) {
  for (auto& [name, value] : out.solutions[i].bindings)
    if (name == var) return term_to_string(value);
  return "<none>";
}

}  // namespace

TEST_CASE("append forced solution") {
  RunOutcome out = run(kAppend, "append([1],[2],Z)");
  REQUIRE(out.kind == RunKind::Solutions);
  REQUIRE(out.solution_count == 1);
  CHECK(solution_str(out, 0, "Z") == "[1,2]");
}

TEST_CASE("append enumerates splittings in clause order") {
  RunOutcome out = run(kAppend, "append(X,Y,[a,b])");
  REQUIRE(out.solution_count == 3);
  CHECK(solution_str(out, 0, "X") == "[]");
  CHECK(solution_str(out, 1, "X") == "[a]");
  CHECK(solution_str(out, 2, "X") == "[a,b]");
}

TEST_CASE("prepend hand-executed") {
  RunOutcome out = run(kPrepend, "prepend(a,[b],Y)");
  REQUIRE(out.solution_count == 1);
  CHECK(solution_str(out, 0, "Y") == "[a,b]");
}

TEST_CASE("zero budget yields ResourceLimit") {
  RunOutcome out = run(kPrepend, "prepend(a,[b],Y)", Budget{0, 10});
  CHECK(out.kind == RunKind::ResourceLimit);
}

TEST_CASE("runaway recursion hits the step budget") {
  RunOutcome out = run("loop :- loop.\n", "loop", Budget{5000, 100});
  CHECK(out.kind == RunKind::ResourceLimit);
}

TEST_CASE("occurs check makes X = f(X) fail") {
  RunOutcome out = run("p(X) :- X = f(X).\n", "p(Y)");
  REQUIRE(out.kind == RunKind::Solutions);
  CHECK(out.solution_count == 0);
}

TEST_CASE("cut prunes clause alternatives") {
  RunOutcome out = run(
      "f(0,zero) :- !.\n"
      "f(N,pos) :- N > 0.\n"
      "f(_,other).\n",
      "f(0,R)");
  REQUIRE(out.solution_count == 1);
  CHECK(solution_str(out, 0, "R") == "zero");
  out = run(
      "f(0,zero) :- !.\n"
      "f(N,pos) :- N > 0.\n"
      "f(_,other).\n",
      "f(3,R)");
  REQUIRE(out.solution_count == 2);
  CHECK(solution_str(out, 0, "R") == "pos");
  CHECK(solution_str(out, 1, "R") == "other");
}

TEST_CASE("arithmetic and comparison builtins") {
  RunOutcome out = run("fact(0,1).\nfact(N,F) :- N > 0, N1 is N-1, fact(N1,F1), F is N*F1.\n",
                       "fact(5,F)");
  REQUIRE(out.solution_count == 1);
  CHECK(solution_str(out, 0, "F") == "120");
}

TEST_CASE("arithmetic error is a runtime error, not failure") {
  RunOutcome out = run("p(X) :- X is foo + 1.\n", "p(X)");
  CHECK(out.kind == RunKind::RuntimeError);
}

TEST_CASE("undefined predicate is a runtime error") {
  RunOutcome out = run("p(X) :- mystery(X).\n", "p(X)");
  CHECK(out.kind == RunKind::RuntimeError);
}

TEST_CASE("length builtin modes") {
  RunOutcome out = run("p(N) :- length([a,b,c],N).\n", "p(N)");
  CHECK(solution_str(out, 0, "N") == "3");
  out = run("p(L) :- length(L,2).\n", "p(L)");
  REQUIRE(out.solution_count == 1);
  out = run("p(L,N) :- length(L,N), N > 1, !.\n", "p(L,N)");
  REQUIRE(out.solution_count == 1);
  CHECK(solution_str(out, 0, "N") == "2");
}

TEST_CASE("eval_check examples") {
  Store store;
  int base = store.fresh(1);
  TermPtr x = Term::mk_var(0, "X");
  // X = [a]
  REQUIRE(store.unify({x, base}, {Term::cons(Term::mk_atom("a"), Term::nil()), 0}));
  TermPtr list_x = Term::mk_comp("list", {x});
  CHECK(eval_check({list_x}, base, store) == nullptr);

  Store store2;
  base = store2.fresh(1);
  REQUIRE(store2.unify({x, base}, {Term::mk_comp("f", {Term::mk_atom("a")}), 0}));
  TermPtr failing = eval_check({list_x}, base, store2);
  REQUIRE(failing != nullptr);
  CHECK(struct_eq(failing, list_x));

  // unreachable fails under any binding
  Store store3;
  base = store3.fresh(1);
  TermPtr unre = Term::mk_atom("unreachable");
  failing = eval_check({unre}, base, store3);
  REQUIRE(failing != nullptr);
}

TEST_CASE("eval_check reports the leftmost failing conjunct") {
  Store store;
  int base = store.fresh(2);
  TermPtr x = Term::mk_var(0, "X");
  TermPtr y = Term::mk_var(1, "Y");
  REQUIRE(store.unify({x, base}, {Term::mk_atom("a"), 0}));
  TermPtr c1 = Term::mk_comp("var", {x});  // fails
  TermPtr c2 = Term::mk_comp("num", {y});  // would also fail
  TermPtr failing = eval_check({c1, c2}, base, store);
  CHECK(struct_eq(failing, c1));
}

TEST_CASE("unregistered property raises UnrunnableProperty") {
  Store store;
  int base = store.fresh(1);
  TermPtr c = Term::mk_comp("frob", {Term::mk_var(0, "X")});
  CHECK_THROWS_AS(eval_check({c}, base, store), UnrunnableProperty);
}

TEST_CASE("run_instrumented on the checked prepend program") {
  Program p = parse_program(kPrependChecked);
  int nv = 0;
  // all-ground inputs: the third program point's nonground(Ys) is violated
  TermPtr g = parse_goal("prepend(g,[g1,g2],Y)", &nv);
  RunOutcome out = run_instrumented(p, g, nv, Budget{});
  REQUIRE(out.kind == RunKind::CheckError);
  CHECK(out.error.point == 2);
  CHECK(term_to_string(out.error.failing) == "nonground(Ys)");
  // witness restricted to assertion variables
  bool has_ys = false;
  for (auto& [name, val] : out.error.witness)
    if (name == "Ys") {
      has_ys = true;
      CHECK(term_to_string(val) == "[g,g1,g2]");
    }
  CHECK(has_ys);

  // free inputs: Ys stays nonground, nothing fires
  g = parse_goal("prepend(A,[B],Y)", &nv);
  out = run_instrumented(p, g, nv, Budget{});
  REQUIRE(out.kind == RunKind::Solutions);
  CHECK(out.solution_count == 1);
}

TEST_CASE("run_instrumented equals solve on check-free programs") {
  const char* progs[] = {kAppend, kPrepend};
  const char* goals[] = {"append(X,Y,[a,b,c])", "prepend(f(Z),[Z],Y)"};
  for (int i = 0; i < 2; ++i) {
    Program p = parse_program(progs[i]);
    int nv = 0;
    TermPtr g = parse_goal(goals[i], &nv);
    RunOutcome a = solve(p, g, nv, Budget{});
    RunOutcome b = run_instrumented(p, g, nv, Budget{});
    REQUIRE(a.kind == b.kind);
    REQUIRE(a.solution_count == b.solution_count);
    for (size_t s = 0; s < a.solutions.size(); ++s)
      for (size_t j = 0; j < a.solutions[s].bindings.size(); ++j)
        CHECK(alpha_eq(a.solutions[s].bindings[j].second, b.solutions[s].bindings[j].second));
  }
}

TEST_CASE("trace of prepend records three points") {
  Program p = parse_program(kPrepend);
  int nv = 0;
  TermPtr g = parse_goal("prepend(a,[b],Y)", &nv);
  Trace tr = trace_program(p, g, nv, Budget{});
  REQUIRE(tr.snapshots.size() == 3);
  CHECK(tr.snapshots[0].point == 0);
  CHECK(tr.snapshots[1].point == 1);
  CHECK(tr.snapshots[2].point == 2);
  // in the middle snapshot (after Ys=[X|Rest]) Ys is [a|Rest] with Rest free
  const Snapshot& s1 = tr.snapshots[1];
  TermPtr ys = s1.values[2];  // clause vars in order X,Xs,Ys,Rest
  REQUIRE(ys->is_comp());
  CHECK(ys->name == ".");
  CHECK(term_to_string(ys->args[0]) == "a");
  CHECK(ys->args[1]->is_var());
  TermPtr rest = s1.values[3];
  CHECK(rest->is_var());
}

TEST_CASE("trace of an immediately failing goal has only entry snapshots") {
  Program p = parse_program("p(a) :- q.\nq :- fail.\n");
  int nv = 0;
  TermPtr g = parse_goal("p(a)", &nv);
  Trace tr = trace_program(p, g, nv, Budget{});
  REQUIRE(tr.snapshots.size() == 2);
  CHECK(tr.snapshots[0].point == 0);
  CHECK(tr.snapshots[1].point == 0);
}

TEST_CASE("budget-limited trace is a prefix of the full trace") {
  Program p = parse_program(kAppend);
  int nv = 0;
  TermPtr g = parse_goal("append(X,Y,[a,b,c,d])", &nv);
  Trace full = trace_program(p, g, nv, Budget{});
  Trace cut = trace_program(p, g, nv, Budget{6, 10'000});
  REQUIRE(cut.outcome.kind == RunKind::ResourceLimit);
  REQUIRE(cut.snapshots.size() <= full.snapshots.size());
  for (size_t i = 0; i < cut.snapshots.size(); ++i) {
    CHECK(cut.snapshots[i].point == full.snapshots[i].point);
    CHECK(cut.snapshots[i].clause_index == full.snapshots[i].clause_index);
    REQUIRE(cut.snapshots[i].values.size() == full.snapshots[i].values.size());
    for (size_t j = 0; j < cut.snapshots[i].values.size(); ++j)
      CHECK(alpha_eq(cut.snapshots[i].values[j], full.snapshots[i].values[j]));
  }
}

TEST_CASE("eval_check never alters bindings") {
  Rng rng(42);
  for (int iter = 0; iter < 500; ++iter) {
    Store store;
    int base = store.fresh(3);
    auto mk_random = [&](auto&& self, int depth) -> TermPtr {
      switch (rng.below(depth > 2 ? 3 : 5)) {
        case 0: return Term::mk_atom("a");
        case 1: return Term::mk_num((long long)rng.range(-3, 3));
        case 2: return Term::mk_var((int)rng.below(3));
        case 3: return Term::mk_comp("f", {self(self, depth + 1)});
        default:
          return Term::cons(self(self, depth + 1),
                            rng.chance(0.5) ? Term::nil() : self(self, depth + 1));
      }
    };
    for (int v = 0; v < 3; ++v)
      if (rng.chance(0.7))
        store.unify({Term::mk_var(v), base}, {mk_random(mk_random, 0), base});
    size_t mark = store.mark();
    std::vector<TermPtr> resolved_before;
    for (int v = 0; v < 3; ++v)
      resolved_before.push_back(store.resolve({Term::mk_var(v), base}));

    TermPtr x = Term::mk_var(0, "X"), y = Term::mk_var(1, "Y"), z = Term::mk_var(2, "Z");
    std::vector<TermPtr> conj = {
        Term::mk_comp("any", {x}),
        Term::mk_comp("mshare",
                      {Term::cons(Term::cons(x, Term::cons(y, Term::nil())),
                                  Term::cons(Term::cons(z, Term::nil()), Term::nil()))}),
        Term::mk_comp("linear", {Term::cons(x, Term::cons(y, Term::nil()))}),
    };
    eval_check(conj, base, store);
    CHECK(store.mark() == mark);
    for (int v = 0; v < 3; ++v)
      CHECK(struct_eq(resolved_before[v], store.resolve({Term::mk_var(v), base})));
  }
}

TEST_CASE("mshare run-time check is permutation-insensitive") {
  Rng rng(7);
  TermPtr x = Term::mk_var(0, "X"), y = Term::mk_var(1, "Y"), z = Term::mk_var(2, "Z");
  auto lst = [](std::vector<TermPtr> ts) {
    TermPtr l = Term::nil();
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) l = Term::cons(*it, l);
    return l;
  };
  for (int iter = 0; iter < 200; ++iter) {
    Store store;
    int base = store.fresh(3);
    int extra = store.fresh(2);
    store.unify({x, base}, {Term::mk_comp("f", {Term::mk_var(0), Term::mk_var(1)}), extra});
    store.unify({y, base}, {Term::mk_comp("g", {Term::mk_var(0)}), extra});

    std::vector<TermPtr> groups = {lst({x, y}), lst({x}), lst({y}), lst({z})};
    std::vector<TermPtr> groups_perm = {lst({z}), lst({y, x}), lst({y}), lst({x})};
    for (size_t i = groups_perm.size(); i > 1; --i)
      std::swap(groups_perm[i - 1], groups_perm[rng.below(i)]);

    TermPtr m1 = Term::mk_comp("mshare", {lst(groups)});
    TermPtr m2 = Term::mk_comp("mshare", {lst(groups_perm)});
    CHECK((eval_check({m1}, base, store) == nullptr) ==
          (eval_check({m2}, base, store) == nullptr));
    CHECK(eval_check({m1}, base, store) == nullptr);
  }
}

TEST_CASE("mshare ignores variables covered by a clique in the same check") {
  Store store;
  int base = store.fresh(4);
  TermPtr x = Term::mk_var(0, "X"), y = Term::mk_var(1, "Y"), z = Term::mk_var(2, "Z"),
          w = Term::mk_var(3, "W");
  int extra = store.fresh(1);
  store.unify({x, base}, {Term::mk_comp("f", {Term::mk_var(0)}), extra});
  store.unify({y, base}, {Term::mk_comp("g", {Term::mk_var(0)}), extra});
  auto lst = [](std::vector<TermPtr> ts) {
    TermPtr l = Term::nil();
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) l = Term::cons(*it, l);
    return l;
  };
  TermPtr clique = Term::mk_comp("clique", {lst({x, y, z})});
  TermPtr mshare = Term::mk_comp("mshare", {lst({lst({w})})});
  // X,Y share a run-time variable and are nonground, but they are clique-covered
  CHECK(eval_check({clique, mshare}, base, store) == nullptr);
  // if the same variables appear without clique coverage, mshare fails:
  // X's sharing group {X,Y} is not admitted
  CHECK(eval_check({Term::mk_comp("any", {x}), Term::mk_comp("any", {y}), mshare}, base,
                   store) != nullptr);
}

TEST_CASE("linear holds for terms sharing a variable but individually linear") {
  // {X/f(A,B), Y/g(A,C)}
  Store store;
  int base = store.fresh(2);
  int extra = store.fresh(3);  // A,B,C
  TermPtr x = Term::mk_var(0, "X"), y = Term::mk_var(1, "Y");
  store.unify({x, base}, {Term::mk_comp("f", {Term::mk_var(0), Term::mk_var(1)}), extra});
  store.unify({y, base}, {Term::mk_comp("g", {Term::mk_var(0), Term::mk_var(2)}), extra});
  TermPtr lin = Term::mk_comp("linear", {Term::cons(x, Term::cons(y, Term::nil()))});
  CHECK(eval_check({lin}, base, store) == nullptr);

  // a genuinely nonlinear term fails
  Store store2;
  base = store2.fresh(2);
  extra = store2.fresh(1);
  store2.unify({x, base}, {Term::mk_comp("f", {Term::mk_var(0), Term::mk_var(0)}), extra});
  CHECK(eval_check({lin}, base, store2) != nullptr);
}
