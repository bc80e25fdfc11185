#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace mlp {

enum class TermKind { Var, Atom, Num, Comp };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Immutable term node. Variables carry a numeric id (clause-local after
/// parsing, machine-global at run time) plus a display name.
struct Term {
  TermKind kind;
  int var = -1;
  std::string name;  // functor for Atom/Comp, display name for Var
  long long num = 0;
  std::vector<TermPtr> args;

  bool is_var() const { return kind == TermKind::Var; }
  bool is_atom() const { return kind == TermKind::Atom; }
  bool is_num() const { return kind == TermKind::Num; }
  bool is_comp() const { return kind == TermKind::Comp; }
  int arity() const { return kind == TermKind::Comp ? (int)args.size() : 0; }

  static TermPtr mk_var(int id, std::string name = "");
  static TermPtr mk_atom(std::string name);
  static TermPtr mk_num(long long v);
  static TermPtr mk_comp(std::string functor, std::vector<TermPtr> args);

  static const TermPtr& nil();  // []
  static TermPtr cons(TermPtr head, TermPtr tail);
};

bool struct_eq(const TermPtr& a, const TermPtr& b);

/// Structural equality modulo consistent variable renaming.
bool alpha_eq(const TermPtr& a, const TermPtr& b);

/// Variable ids in first-occurrence order, deduplicated.
void collect_vars(const TermPtr& t, std::vector<int>& out);
std::vector<int> term_vars(const TermPtr& t);
bool term_has_var(const TermPtr& t, int var);

bool is_ground_term(const TermPtr& t);
bool is_linear_term(const TermPtr& t);
/// Proper list with fully instantiated spine.
bool is_proper_list(const TermPtr& t);
bool list_elements(const TermPtr& t, std::vector<TermPtr>& out);

/// Replaces variables by the mapped term; unmapped vars are kept.
TermPtr subst_vars(const TermPtr& t, const std::vector<TermPtr>& map);

/// Renumbers variables in first-occurrence order starting at 0; used to put
/// bindings and goals into a canonical form for set comparisons.
TermPtr canonical_term(const TermPtr& t);
std::vector<TermPtr> canonical_terms(const std::vector<TermPtr>& ts);

std::string term_to_string(const TermPtr& t);
std::string terms_to_string(const std::vector<TermPtr>& ts, const char* sep = ", ");

}  // namespace mlp
