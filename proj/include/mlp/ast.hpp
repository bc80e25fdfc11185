#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlp/term.hpp"

namespace mlp {

struct Location {
  int line = 0;
  int col = 0;
  bool operator==(const Location&) const = default;
};

enum class AStatus { True, Check, Trust, Entry };

const char* status_name(AStatus s);

/// Predicate-level assertion directive. Entry assertions use status Entry
/// with an empty success conjunction; program-point assertions live in
/// clause bodies as Literal::PP.
struct Assertion {
  AStatus status = AStatus::Check;
  TermPtr head;  // head args over assertion-local var ids
  std::vector<TermPtr> calls;
  std::vector<TermPtr> success;
  std::vector<TermPtr> comp;  // parsed and preserved, never checked at run time
  int num_vars = 0;
  Location loc;

  std::string pred_name() const { return head->name; }
  int pred_arity() const { return head->arity(); }
};

struct Literal {
  enum class Kind { Goal, PP, Cut };
  Kind kind = Kind::Goal;
  TermPtr goal;                // Kind::Goal
  AStatus pp_status = AStatus::True;
  std::vector<TermPtr> pp_conj;  // Kind::PP
  Location loc;

  static Literal mk_goal(TermPtr g, Location l);
  static Literal mk_pp(AStatus st, std::vector<TermPtr> conj, Location l);
  static Literal mk_cut(Location l);
};

struct Clause {
  TermPtr head;
  std::vector<Literal> body;
  int num_vars = 0;  // clause-local vars are numbered 0..num_vars-1
  Location loc;

  /// Number of program points: clause entry plus one after every
  /// goal/cut literal (PP literals are annotations, not points).
  int num_points() const;
  /// Clause variable ids in first-occurrence order (head first).
  std::vector<int> var_order() const;
  /// Display terms for vars 0..num_vars-1.
  std::vector<TermPtr> var_terms() const;
};

struct ModeDef {
  std::string name;
  int nparams = 1;  // 1: m(A), 2: m(A,P)
  // Templates over Var 0 = argument, Var 1 = property parameter. A property
  // application P(A) is represented as $apply(P, A).
  std::vector<TermPtr> calls;
  std::vector<TermPtr> success;
};

struct PredId {
  std::string name;
  int arity = 0;
  bool operator==(const PredId&) const = default;
  auto operator<=>(const PredId&) const = default;
  std::string str() const { return name + "/" + std::to_string(arity); }
};

struct Predicate {
  std::string name;
  int arity = 0;
  std::vector<Clause> clauses;
  PredId id() const { return {name, arity}; }
};

struct Program {
  std::vector<Predicate> preds;
  std::vector<Assertion> assertions;  // entry + pred assertions, source order
  std::vector<ModeDef> modedefs;

  const Predicate* find_pred(const std::string& name, int arity) const;
  Predicate* find_pred(const std::string& name, int arity);
  std::vector<PredId> exports() const;  // predicates with entry assertions
  std::vector<const Assertion*> entries_for(const PredId& p) const;
  std::vector<const Assertion*> assertions_for(const PredId& p, AStatus st) const;
  bool empty() const { return preds.empty() && assertions.empty(); }
};

bool clause_alpha_eq(const Clause& a, const Clause& b);
bool assertion_alpha_eq(const Assertion& a, const Assertion& b);
/// Structural equality modulo variable renaming and source locations.
bool program_alpha_eq(const Program& a, const Program& b);

}  // namespace mlp
