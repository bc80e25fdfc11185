#include "mlp/modes_expand.hpp"

namespace mlp {

namespace {

// Instantiates a modedef template: Var 0 -> arg var, Var 1 -> property
// parameter; $apply(P, X...) applies the property term to extra args.
TermPtr inst_template(const TermPtr& tpl, const TermPtr& arg_var, const TermPtr& prop) {
  if (tpl->is_var()) {
    if (tpl->var == 0) return arg_var;
    if (tpl->var == 1) return prop;
    return tpl;
  }
  if (tpl->is_comp()) {
    if (tpl->name == "$apply") {
      TermPtr p = inst_template(tpl->args[0], arg_var, prop);
      std::vector<TermPtr> extra;
      for (size_t i = 1; i < tpl->args.size(); ++i)
        extra.push_back(inst_template(tpl->args[i], arg_var, prop));
      if (p->is_atom()) return Term::mk_comp(p->name, std::move(extra));
      if (p->is_comp()) {
        std::vector<TermPtr> args = p->args;
        for (auto& e : extra) args.push_back(e);
        return Term::mk_comp(p->name, std::move(args));
      }
      throw UnknownMode("property parameter is not a property term");
    }
    std::vector<TermPtr> args;
    for (auto& a : tpl->args) args.push_back(inst_template(a, arg_var, prop));
    return Term::mk_comp(tpl->name, std::move(args));
  }
  return tpl;
}

const ModeDef* find_mode(const std::vector<ModeDef>& defs, const std::string& name, int nparams) {
  for (auto& d : defs)
    if (d.name == name && d.nparams == nparams) return &d;
  return nullptr;
}

bool is_mode_name(const std::string& s) {
  return s == "+" || s == "-" || s == "?";
}

}  // namespace

std::vector<ModeDef> builtin_modedefs() {
  std::vector<ModeDef> out;
  TermPtr A = Term::mk_var(0, "A");
  TermPtr P = Term::mk_var(1, "P");
  auto ap = [&](TermPtr p, TermPtr a) { return Term::mk_comp("$apply", {p, a}); };
  out.push_back({"+", 1, {Term::mk_comp("nonvar", {A})}, {}});
  out.push_back({"-", 1, {Term::mk_comp("var", {A})}, {}});
  out.push_back({"?", 1, {}, {}});
  out.push_back({"+", 2, {ap(P, A)}, {}});
  out.push_back({"-", 2, {Term::mk_comp("var", {A})}, {ap(P, A)}});
  return out;
}

Program expand_modes(const Program& prog) {
  Program out = prog;
  std::vector<ModeDef> defs = builtin_modedefs();
  for (auto& d : prog.modedefs) defs.push_back(d);

  for (auto& a : out.assertions) {
    if (!a.head->is_comp()) continue;
    std::vector<TermPtr> head_args;
    std::vector<TermPtr> new_calls, new_success;
    int next_var = a.num_vars;
    bool changed = false;
    for (size_t i = 0; i < a.head->args.size(); ++i) {
      const TermPtr& arg = a.head->args[i];
      const ModeDef* md = nullptr;
      TermPtr prop;
      if (arg->is_atom()) {
        md = find_mode(defs, arg->name, 1);
        if (!md && is_mode_name(arg->name)) throw UnknownMode(arg->name);
      } else if (arg->is_comp() && arg->args.size() == 1 && find_mode(defs, arg->name, 2)) {
        md = find_mode(defs, arg->name, 2);
        prop = arg->args[0];
      } else if (arg->is_comp() && is_mode_name(arg->name)) {
        throw UnknownMode(arg->name + "/" + std::to_string(arg->args.size()));
      }
      if (!md) {
        head_args.push_back(arg);
        continue;
      }
      changed = true;
      TermPtr fresh = Term::mk_var(next_var, "A" + std::to_string(i + 1));
      next_var++;
      head_args.push_back(fresh);
      for (auto& c : md->calls) new_calls.push_back(inst_template(c, fresh, prop));
      for (auto& s : md->success) new_success.push_back(inst_template(s, fresh, prop));
    }
    if (!changed) continue;
    a.head = Term::mk_comp(a.head->name, std::move(head_args));
    for (auto& c : new_calls) a.calls.push_back(c);
    for (auto& s : new_success) a.success.push_back(s);
    a.num_vars = next_var;
  }
  return out;
}

}  // namespace mlp
