#include "mlp/ast.hpp"

#include <algorithm>
#include <functional>

namespace mlp {

const char* status_name(AStatus s) {
  switch (s) {
    case AStatus::True: return "true";
    case AStatus::Check: return "check";
    case AStatus::Trust: return "trust";
    case AStatus::Entry: return "entry";
  }
  return "?";
}

Literal Literal::mk_goal(TermPtr g, Location l) {
  Literal lit;
  lit.kind = Kind::Goal;
  lit.goal = std::move(g);
  lit.loc = l;
  return lit;
}

Literal Literal::mk_pp(AStatus st, std::vector<TermPtr> conj, Location l) {
  Literal lit;
  lit.kind = Kind::PP;
  lit.pp_status = st;
  lit.pp_conj = std::move(conj);
  lit.loc = l;
  return lit;
}

Literal Literal::mk_cut(Location l) {
  Literal lit;
  lit.kind = Kind::Cut;
  lit.loc = l;
  return lit;
}

int Clause::num_points() const {
  int n = 1;
  for (auto& lit : body)
    if (lit.kind != Literal::Kind::PP) n++;
  return n;
}

std::vector<int> Clause::var_order() const {
  std::vector<int> order;
  collect_vars(head, order);
  for (auto& lit : body) {
    if (lit.kind == Literal::Kind::Goal) collect_vars(lit.goal, order);
    if (lit.kind == Literal::Kind::PP)
      for (auto& c : lit.pp_conj) collect_vars(c, order);
  }
  for (int v = 0; v < num_vars; ++v)
    if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
  return order;
}

std::vector<TermPtr> Clause::var_terms() const {
  std::vector<TermPtr> out(num_vars);
  // Recover display names from occurrences; fall back to synthetic names.
  std::function<void(const TermPtr&)> scan = [&](const TermPtr& t) {
    if (t->is_var()) {
      if (t->var >= 0 && t->var < num_vars && !out[t->var]) out[t->var] = t;
    } else if (t->is_comp()) {
      for (auto& a : t->args) scan(a);
    }
  };
  scan(head);
  for (auto& lit : body) {
    if (lit.kind == Literal::Kind::Goal) scan(lit.goal);
    if (lit.kind == Literal::Kind::PP)
      for (auto& c : lit.pp_conj) scan(c);
  }
  for (int v = 0; v < num_vars; ++v)
    if (!out[v]) out[v] = Term::mk_var(v);
  return out;
}

const Predicate* Program::find_pred(const std::string& name, int arity) const {
  for (auto& p : preds)
    if (p.name == name && p.arity == arity) return &p;
  return nullptr;
}

Predicate* Program::find_pred(const std::string& name, int arity) {
  for (auto& p : preds)
    if (p.name == name && p.arity == arity) return &p;
  return nullptr;
}

std::vector<PredId> Program::exports() const {
  std::vector<PredId> out;
  for (auto& a : assertions) {
    if (a.status != AStatus::Entry) continue;
    PredId id{a.pred_name(), a.pred_arity()};
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  }
  return out;
}

std::vector<const Assertion*> Program::entries_for(const PredId& p) const {
  std::vector<const Assertion*> out;
  for (auto& a : assertions)
    if (a.status == AStatus::Entry && a.pred_name() == p.name && a.pred_arity() == p.arity)
      out.push_back(&a);
  return out;
}

std::vector<const Assertion*> Program::assertions_for(const PredId& p, AStatus st) const {
  std::vector<const Assertion*> out;
  for (auto& a : assertions)
    if (a.status == st && a.pred_name() == p.name && a.pred_arity() == p.arity)
      out.push_back(&a);
  return out;
}

namespace {
TermPtr clause_as_term(const Clause& c) {
  std::vector<TermPtr> items{c.head};
  for (auto& lit : c.body) {
    switch (lit.kind) {
      case Literal::Kind::Goal: items.push_back(lit.goal); break;
      case Literal::Kind::Cut: items.push_back(Term::mk_atom("!")); break;
      case Literal::Kind::PP: {
        std::vector<TermPtr> conj = lit.pp_conj;
        items.push_back(
            Term::mk_comp(std::string("$pp_") + status_name(lit.pp_status), std::move(conj)));
        break;
      }
    }
  }
  return Term::mk_comp("$clause", std::move(items));
}

TermPtr assertion_as_term(const Assertion& a) {
  std::vector<TermPtr> items{Term::mk_atom(status_name(a.status)), a.head};
  items.push_back(Term::mk_comp("$c", a.calls.empty() ? std::vector<TermPtr>{Term::nil()} : a.calls));
  items.push_back(
      Term::mk_comp("$s", a.success.empty() ? std::vector<TermPtr>{Term::nil()} : a.success));
  items.push_back(Term::mk_comp("$g", a.comp.empty() ? std::vector<TermPtr>{Term::nil()} : a.comp));
  return Term::mk_comp("$assertion", std::move(items));
}
}  // namespace

bool clause_alpha_eq(const Clause& a, const Clause& b) {
  return alpha_eq(clause_as_term(a), clause_as_term(b));
}

bool assertion_alpha_eq(const Assertion& a, const Assertion& b) {
  return alpha_eq(assertion_as_term(a), assertion_as_term(b));
}

bool program_alpha_eq(const Program& a, const Program& b) {
  if (a.preds.size() != b.preds.size() || a.assertions.size() != b.assertions.size())
    return false;
  for (size_t i = 0; i < a.assertions.size(); ++i)
    if (!assertion_alpha_eq(a.assertions[i], b.assertions[i])) return false;
  for (size_t i = 0; i < a.preds.size(); ++i) {
    auto& pa = a.preds[i];
    auto& pb = b.preds[i];
    if (pa.name != pb.name || pa.arity != pb.arity || pa.clauses.size() != pb.clauses.size())
      return false;
    for (size_t j = 0; j < pa.clauses.size(); ++j)
      if (!clause_alpha_eq(pa.clauses[j], pb.clauses[j])) return false;
  }
  return true;
}

}  // namespace mlp
