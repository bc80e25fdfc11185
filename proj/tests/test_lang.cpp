#include <set>

#include "doctest.h"
#include "mlp/modes_expand.hpp"
#include "mlp/parser.hpp"
#include "mlp/printer.hpp"

using namespace mlp;

namespace {
const char* kPrepend = R"(:- entry prepend(_,+list,-).

prepend(X,Xs,Ys) :-
    Ys=[X|Rest],
    Rest=Xs.
)";
}

TEST_CASE("parse entry + clause") {
  Program p = parse_program(kPrepend);
  CHECK(p.assertions.size() == 1);
  CHECK(p.assertions[0].status == AStatus::Entry);
  CHECK(p.preds.size() == 1);
  CHECK(p.preds[0].name == "prepend");
  CHECK(p.preds[0].arity == 3);
  CHECK(p.preds[0].clauses.size() == 1);
  CHECK(p.preds[0].clauses[0].body.size() == 2);
  CHECK(p.exports() == std::vector<PredId>{{"prepend", 3}});
}

TEST_CASE("parse empty source") {
  Program p = parse_program("");
  CHECK(p.preds.empty());
  CHECK(p.assertions.empty());
}

TEST_CASE("parse error carries location") {
  try {
    parse_program("p(X) :- q(X]. ");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.loc.line == 1);
    CHECK(e.loc.col >= 12);
  }
}

TEST_CASE("unknown assertion status rejected") {
  CHECK_THROWS_AS(parse_program(":- frobnicate pred p(X).\n"), ParseError);
}

TEST_CASE("mode expansion of the paper's append assertion") {
  Program p = parse_program(":- pred append(+list,+list,-list).\n");
  Program q = expand_modes(p);
  REQUIRE(q.assertions.size() == 1);
  const Assertion& a = q.assertions[0];
  REQUIRE(a.head->arity() == 3);
  for (auto& arg : a.head->args) CHECK(arg->is_var());
  REQUIRE(a.calls.size() == 3);
  CHECK(term_to_string(a.calls[0]) == "list(" + a.head->args[0]->name + ")");
  CHECK(term_to_string(a.calls[1]) == "list(" + a.head->args[1]->name + ")");
  CHECK(term_to_string(a.calls[2]) == "var(" + a.head->args[2]->name + ")");
  REQUIRE(a.success.size() == 1);
  CHECK(term_to_string(a.success[0]) == "list(" + a.head->args[2]->name + ")");

  Program expected =
      parse_program(":- pred append(X,Y,Z) : (list(X), list(Y), var(Z)) => list(Z).\n");
  CHECK(assertion_alpha_eq(q.assertions[0], expected.assertions[0]));
}

TEST_CASE("mode expansion leaves mode-free assertions alone") {
  Program p = parse_program(":- pred append(X,Y,Z) : (list(X), list(Y), var(Z)) => list(Z).\n");
  Program q = expand_modes(p);
  CHECK(assertion_alpha_eq(p.assertions[0], q.assertions[0]));
}

TEST_CASE("mode expansion of the prepend entry") {
  Program p = parse_program(kPrepend);
  Program q = expand_modes(p);
  const Assertion& a = q.assertions[0];
  // `_` imposes no property; +list -> list(A2); - -> var(A3)
  REQUIRE(a.head->arity() == 3);
  CHECK(a.head->args[0]->is_var());
  REQUIRE(a.calls.size() == 2);
  CHECK(a.calls[0]->name == "list");
  CHECK(struct_eq(a.calls[0]->args[0], a.head->args[1]));
  CHECK(a.calls[1]->name == "var");
  CHECK(struct_eq(a.calls[1]->args[0], a.head->args[2]));
  CHECK(a.success.empty());
}

TEST_CASE("mode expansion is idempotent") {
  Program p = parse_program(kPrepend);
  Program q1 = expand_modes(p);
  Program q2 = expand_modes(q1);
  CHECK(program_alpha_eq(q1, q2));
}

TEST_CASE("typed mode +list(num)") {
  Program p = parse_program(":- entry p(+list(num),+num,-).\n");
  Program q = expand_modes(p);
  const Assertion& a = q.assertions[0];
  REQUIRE(a.calls.size() == 3);
  CHECK(a.calls[0]->name == "list");
  CHECK(a.calls[0]->arity() == 2);
  CHECK(a.calls[0]->args[0]->name == "num");
  CHECK(a.calls[1]->name == "num");
  CHECK(a.calls[2]->name == "var");
}

TEST_CASE("user modedef") {
  Program p = parse_program(
      ":- modedef ground_in(A) : ground(A).\n"
      ":- pred f(ground_in,-num).\n");
  Program q = expand_modes(p);
  const Assertion& a = q.assertions[0];
  REQUIRE(a.calls.size() == 2);
  CHECK(a.calls[0]->name == "ground");
  CHECK(a.calls[1]->name == "var");
  REQUIRE(a.success.size() == 1);
  CHECK(a.success[0]->name == "num");
}

TEST_CASE("print/parse round trip") {
  const char* srcs[] = {
      kPrepend,
      "a.\n",
      "p(X) :- q(X), !, r(f(X,[1,2|T])).\n",
      ":- trust pred exp_op(X,Y,Z) : (num(X), num(Y)) => num(Z) + det.\n"
      "exp_op(X,Y,Z) :- Z is X**Y.\n",
      "f(N,F) :- N > 1, N1 is N-1, f(N1,F1), F is N*F1.\n",
      "s :- t(-4), u(3+4*2), v((1+2)*3).\n t(_). u(_). v(_).\n",
  };
  for (const char* src : srcs) {
    CAPTURE(src);
    Program p1 = parse_program(src);
    std::string printed = print_program(p1);
    CAPTURE(printed);
    Program p2 = parse_program(printed);
    CHECK(program_alpha_eq(p1, p2));
    // parse . print . parse == parse
    CHECK(print_program(p2) == printed);
  }
}

TEST_CASE("print of annotated clause uses flat check conjunctions") {
  Program p = parse_program(
      "prepend(X,Xs,Ys) :-\n"
      "    check(any(X), nonvar(Xs), var(Ys)),\n"
      "    Ys=[X|Rest].\n");
  std::string printed = print_program(p);
  CHECK(printed.find("check(any(X), nonvar(Xs), var(Ys))") != std::string::npos);
  Program q = parse_program(printed);
  CHECK(program_alpha_eq(p, q));
}

TEST_CASE("empty program prints empty") {
  CHECK(print_program(Program{}) == "");
}

TEST_CASE("single fact prints as a dot-terminated line") {
  Program p = parse_program("a.");
  CHECK(print_program(p) == "a.\n");
}

TEST_CASE("program points count goals and cuts, not annotations") {
  Program p = parse_program(
      "p(X) :-\n"
      "    true(var(X)),\n"
      "    q(X), !,\n"
      "    r(X).\n"
      "q(_). r(_).\n");
  CHECK(p.preds[0].clauses[0].num_points() == 4);
}
