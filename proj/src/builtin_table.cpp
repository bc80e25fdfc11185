#include "mlp/builtin_table.hpp"

#include <map>

#include "mlp/faults.hpp"

namespace mlp {

namespace {

TermPtr V(int i) { return Term::mk_var(i, "A" + std::to_string(i + 1)); }
TermPtr P(const char* name, TermPtr a) { return Term::mk_comp(name, {std::move(a)}); }

std::vector<BuiltinDesc> build_table() {
  std::vector<BuiltinDesc> t;

  t.push_back({"is", 2, false, {0}, {{{}, {P("num", V(0)), P("ground", V(1))}}}});

  for (const char* cmp : {"<", ">", "=<", ">=", "=:=", "=\\="})
    t.push_back({cmp, 2, false, {}, {{{}, {P("ground", V(0)), P("ground", V(1))}}}});

  t.push_back({"==", 2, false, {}, {{{}, {}}}});

  // \=/2 and \==/2 are pure tests; the seeded table corruption claims their
  // arguments come out ground.
  const bool neq_fault = faults::enabled(faults::Fault::NeqBuiltinWrong);
  std::vector<TermPtr> neq_succ;
  if (neq_fault) neq_succ = {P("ground", V(0)), P("ground", V(1))};
  t.push_back({"\\=", 2, false, {}, {{{}, neq_succ}}});
  t.push_back({"\\==", 2, false, {}, {{{}, neq_succ}}});

  {
    BuiltinDesc len{"length", 2, false, {0, 1}, {}};
    len.entries.push_back({{P("list", V(0)), P("var", V(1))}, {P("list", V(0)), P("num", V(1))}});
    len.entries.push_back({{P("var", V(0)), P("num", V(1))}, {P("list", V(0)), P("num", V(1))}});
    len.entries.push_back({{P("list", V(0)), P("num", V(1))}, {P("list", V(0)), P("num", V(1))}});
    if (!faults::enabled(faults::Fault::LengthMissingNondet))
      len.entries.push_back({{}, {P("list", V(0)), P("num", V(1))}});
    t.push_back(std::move(len));
  }

  t.push_back({"arg", 3, false, {2}, {{{}, {P("num", V(0)), P("nonvar", V(1))}}}});

  for (const char* prop : {"num", "atom", "var", "nonvar", "ground", "list", "nonground"})
    t.push_back({prop, 1, false, {}, {{{}, {P(prop, V(0))}}}});

  t.push_back({"fail", 0, true, {}, {}});
  t.push_back({"false", 0, true, {}, {}});

  return t;
}

}  // namespace

const BuiltinDesc* builtin_transfer_desc(const std::string& name, int arity) {
  // rebuilt per call so fault toggles take effect; tables are tiny
  static thread_local std::vector<BuiltinDesc> table;
  static thread_local bool neq_state = false, len_state = false, init = false;
  bool neq = faults::enabled(faults::Fault::NeqBuiltinWrong);
  bool len = faults::enabled(faults::Fault::LengthMissingNondet);
  if (!init || neq != neq_state || len != len_state) {
    table = build_table();
    neq_state = neq;
    len_state = len;
    init = true;
  }
  for (auto& d : table)
    if (d.name == name && d.arity == arity) return &d;
  return nullptr;
}

}  // namespace mlp
