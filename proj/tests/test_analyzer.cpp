#include <map>
#include <set>

#include "doctest.h"
#include "mlp/analyzer.hpp"
#include "mlp/faults.hpp"
#include "mlp/interp.hpp"
#include "mlp/modes_expand.hpp"
#include "mlp/parser.hpp"
#include "mlp/printer.hpp"

using namespace mlp;

namespace {

const char* kPrependSrc =
    ":- entry prepend(_,+list,-).\n"
    "\n"
    "prepend(X,Xs,Ys) :-\n"
    "    Ys=[X|Rest],\n"
    "    Rest=Xs.\n";

Program prepend_expanded() { return expand_modes(parse_program(kPrependSrc)); }

std::string annotate_text(const Program& p, const std::string& domain, bool materialize = true) {
  AnalysisGraph g = analyze(p, domain);
  AnnotateOptions opts;
  opts.materialize = materialize;
  return print_program(annotate(p, g, opts));
}

}  // namespace

TEST_CASE("correct modes analysis: no groundness claim for Ys at exit") {
  Program p = prepend_expanded();
  std::string text = annotate_text(p, "modes");
  // success: Ys only nonvar
  CHECK(text.find("=> (any(X), nonvar(Xs), nonvar(Ys))") != std::string::npos);
  CHECK(text.find("true(any(X), nonvar(Xs), nonvar(Ys), nonvar(Rest))") != std::string::npos);
}

TEST_CASE("seeded aliasing-blind domain reproduces the buggy annotation exactly") {
  faults::Injection inj(faults::Fault::ModesAliasingBlind);
  Program p = prepend_expanded();
  std::string text = annotate_text(p, "modes");
  const char* expected_assertion =
      ":- true pred prepend(X,Xs,Ys) : (any(X), nonvar(Xs), var(Ys)) "
      "=> (any(X), nonvar(Xs), nonground(Ys), nonvar(Ys)).";
  const char* expected_clause =
      "prepend(X,Xs,Ys) :-\n"
      "    true(any(X), nonvar(Xs), var(Ys), var(Rest)),\n"
      "    Ys=[X|Rest],\n"
      "    true(any(X), nonvar(Xs), nonground(Ys), nonvar(Ys), var(Rest)),\n"
      "    Rest=Xs,\n"
      "    true(any(X), nonvar(Xs), nonground(Ys), nonvar(Ys), nonvar(Rest)).";
  CHECK(text.find(expected_assertion) != std::string::npos);
  CHECK(text.find(expected_clause) != std::string::npos);
}

TEST_CASE("annotated output reparses (source-to-source contract)") {
  Program p = prepend_expanded();
  for (const char* d : {"modes", "sharing", "shfr", "share_clique", "depthk"}) {
    std::string text = annotate_text(p, d);
    CAPTURE(text);
    Program back = parse_program(text);  // must not throw
    CHECK(!back.preds.empty());
  }
}

TEST_CASE("unreachable predicate is absent from the graph") {
  Program p = expand_modes(parse_program(
      ":- entry p(+num).\n"
      "p(X) :- X > 0.\n"
      "dead(X) :- X = 1.\n"));
  AnalysisGraph g = analyze(p, "modes");
  CHECK(g.nodes_for(0).size() == 1);
  CHECK(g.nodes_for(1).empty());
  // annotate marks the dead predicate's points unreachable
  std::string text = print_program(annotate(p, g));
  CHECK(text.find("dead(X) :-\n    true(unreachable)") != std::string::npos);
}

TEST_CASE("no entry assertions: every predicate gets a top entry") {
  Program p = parse_program("p(X) :- q(X).\nq(a).\n");
  AnalysisGraph g = analyze(p, "modes");
  CHECK(!g.nodes_for(0).empty());
  CHECK(!g.nodes_for(1).empty());
}

TEST_CASE("analysis is deterministic") {
  Program p = expand_modes(parse_program(
      ":- entry qsort(+list(num),-).\n"
      "qsort([],[]).\n"
      "qsort([X|Xs],Ys) :- partition(Xs,X,S,B), qsort(S,S1), qsort(B,B1), "
      "append(S1,[X|B1],Ys).\n"
      "partition([],_,[],[]).\n"
      "partition([X|Xs],P,[X|S],B) :- X =< P, partition(Xs,P,S,B).\n"
      "partition([X|Xs],P,S,[X|B]) :- X > P, partition(Xs,P,S,B).\n"
      "append([],Y,Y).\n"
      "append([X|Xs],Y,[X|Z]) :- append(Xs,Y,Z).\n"));
  for (const char* d : {"modes", "shfr", "depthk"}) {
    std::string a = annotate_text(p, d);
    std::string b = annotate_text(p, d);
    CHECK(a == b);
  }
}

TEST_CASE("monotonicity: a larger entry yields pointwise larger results") {
  const char* tmpl =
      ":- entry p(%s).\n"
      "p(X) :- X = f(Y), q(Y).\n"
      "q(a).\nq(_).\n";
  char ground_src[256], any_src[256];
  snprintf(ground_src, sizeof ground_src, tmpl, "+num");
  snprintf(any_src, sizeof any_src, tmpl, "_");
  Program pg = expand_modes(parse_program(ground_src));
  Program pa = expand_modes(parse_program(any_src));
  AnalysisGraph gg = analyze(pg, "modes");
  AnalysisGraph ga = analyze(pa, "modes");
  const Domain& dom = *gg.domain;
  // per-point claims of the ground-entry run are below the any-entry run
  for (size_t pi = 0; pi < pg.preds.size(); ++pi)
    for (size_t ci = 0; ci < pg.preds[pi].clauses.size(); ++ci)
      for (int pt = 0; pt < pg.preds[pi].clauses[ci].num_points(); ++pt) {
        AsubPtr a = gg.point_lub(pg, (int)pi, (int)ci, pt);
        AsubPtr b = ga.point_lub(pa, (int)pi, (int)ci, pt);
        CHECK(dom.leq(*a, *b));
      }
}

TEST_CASE("multivariance: two calling contexts materialize into two versions") {
  Program p = expand_modes(parse_program(
      ":- entry main1(_,-).\n"
      ":- entry main2(-).\n"
      "main1(W,R) :- id(W,R).\n"
      "main2(R) :- id(b,R).\n"
      "id(X,Y) :- Y = X.\n"));
  AnalysisGraph g = analyze(p, "modes");
  CHECK(g.nodes_for(2).size() == 2);

  std::map<std::string, int> names;
  Program mat = annotate(p, g, {true}, &names);
  bool v1 = false, v2 = false;
  for (auto& pr : mat.preds) {
    if (pr.name == "id_v1") v1 = true;
    if (pr.name == "id_v2") v2 = true;
  }
  CHECK(v1);
  CHECK(v2);
  std::string text = print_program(mat);
  // call sites rewritten to the version names
  CHECK(text.find("id_v1(") != std::string::npos);
  CHECK(text.find("id_v2(") != std::string::npos);

  // single call pattern: identical output under both materialization modes
  Program single = expand_modes(parse_program(
      ":- entry main(-).\n"
      "main(R) :- id(b,R).\n"
      "id(X,Y) :- Y = X.\n"));
  AnalysisGraph gs = analyze(single, "modes");
  CHECK(print_program(annotate(single, gs, {true})) ==
        print_program(annotate(single, gs, {false})));
}

TEST_CASE("materialized and collapsed outputs agree after lub") {
  Program p = expand_modes(parse_program(
      ":- entry main1(_,-).\n"
      ":- entry main2(-).\n"
      "main1(W,R) :- id(W,R).\n"
      "main2(R) :- id(b,R).\n"
      "id(X,Y) :- Y = X.\n"));
  AnalysisGraph g = analyze(p, "modes");
  const Domain& dom = *g.domain;
  // for each original point, lub over version asubs equals the collapsed claim
  for (size_t pi = 0; pi < p.preds.size(); ++pi) {
    auto versions = g.nodes_for((int)pi);
    if (versions.empty()) continue;
    for (size_t ci = 0; ci < p.preds[pi].clauses.size(); ++ci)
      for (int pt = 0; pt < p.preds[pi].clauses[ci].num_points(); ++pt) {
        AsubPtr acc = dom.bottom(p.preds[pi].clauses[ci].num_vars);
        for (auto* n : versions)
          if ((int)n->clauses[ci].points.size() > pt)
            acc = dom.lub(*acc, *n->clauses[ci].points[pt]);
        CHECK(dom.equal(*acc, *g.point_lub(p, (int)pi, (int)ci, pt)));
      }
  }
}

TEST_CASE("concrete domain: analysis states equal interpreter trace snapshots") {
  Program p = prepend_expanded();
  int nv = 0;
  TermPtr goal = parse_goal("prepend(a,[b],Ys)", &nv);
  AnalysisGraph g = analyze_concrete(p, goal, nv);
  Trace tr = trace_program(p, goal, nv, Budget{});

  // group trace snapshots by (pred, clause, point), canonicalized
  std::map<std::tuple<int, int, int>, std::set<std::string>> traced;
  for (auto& s : tr.snapshots)
    traced[{s.pred_index, s.clause_index, s.point}].insert(
        terms_to_string(canonical_terms(s.values)));

  std::map<std::tuple<int, int, int>, std::set<std::string>> analyzed;
  for (auto& n : g.nodes)
    for (size_t ci = 0; ci < n.clauses.size(); ++ci)
      for (size_t pt = 0; pt < n.clauses[ci].points.size(); ++pt)
        for (auto& tup : concrete_asub_tuples(*n.clauses[ci].points[pt]))
          analyzed[{n.pred_index, (int)ci, (int)pt}].insert(
              terms_to_string(canonical_terms(tup)));

  CHECK(traced == analyzed);
}

TEST_CASE("concrete final point of prepend(a,[b],Ys)") {
  Program p = prepend_expanded();
  int nv = 0;
  TermPtr goal = parse_goal("prepend(a,[b],Ys)", &nv);
  AnalysisGraph g = analyze_concrete(p, goal, nv);
  // X, Xs, Ys, Rest at the clause exit
  AsubPtr exit_asub = g.point_lub(p, 0, 0, 2);
  auto tuples = concrete_asub_tuples(*exit_asub);
  REQUIRE(tuples.size() == 1);
  CHECK(term_to_string(tuples[0][0]) == "a");
  CHECK(term_to_string(tuples[0][1]) == "[b]");
  CHECK(term_to_string(tuples[0][2]) == "[a,b]");
  CHECK(term_to_string(tuples[0][3]) == "[b]");
}

TEST_CASE("builtin without a transfer description warns and assumes top") {
  // exercised through the is/2 description being present: no warnings on a
  // plain arithmetic program
  Program p = expand_modes(parse_program(":- entry f(+num,-).\nf(N,M) :- M is N+1.\n"));
  AnalysisGraph g = analyze(p, "modes");
  CHECK(g.warnings.empty());
}

TEST_CASE("trust assertions refine the success and are re-emitted at the call site") {
  Program p = expand_modes(parse_program(
      ":- entry run(+num,-).\n"
      ":- trust pred mystery(X,Y) : ground(X) => num(Y).\n"
      "mystery(X,Y) :- Y = X.\n"
      "run(N,R) :- mystery(N,R).\n"));
  AnalysisGraph g = analyze(p, "modes");
  std::string text = print_program(annotate(p, g));
  CHECK(text.find("num(R)") != std::string::npos);
}

TEST_CASE("analysis rejects assertions with unknown properties") {
  Program p = parse_program(":- entry p(X) : wibble(X).\np(a).\n");
  CHECK_THROWS_AS(analyze(p, "modes"), AnalysisError);
}

TEST_CASE("undefined predicate is an analysis error") {
  Program p = parse_program(":- entry p(-).\np(X) :- ghost(X).\n");
  CHECK_THROWS_AS(analyze(p, "modes"), AnalysisError);
}
