#include "mlp/props.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mlp/faults.hpp"

namespace mlp {

namespace {

bool match_instance(const TermPtr& pat, const TermPtr& t, std::map<int, TermPtr>& sigma) {
  if (pat->is_var()) {
    auto it = sigma.find(pat->var);
    if (it != sigma.end()) return struct_eq(it->second, t);
    sigma[pat->var] = t;
    return true;
  }
  if (pat->kind != t->kind) return false;
  switch (pat->kind) {
    case TermKind::Atom: return pat->name == t->name;
    case TermKind::Num: return pat->num == t->num;
    case TermKind::Comp: {
      if (pat->name != t->name || pat->args.size() != t->args.size()) return false;
      for (size_t i = 0; i < pat->args.size(); ++i)
        if (!match_instance(pat->args[i], t->args[i], sigma)) return false;
      return true;
    }
    default: return false;
  }
}

bool apply_type(const TermPtr& type, const TermPtr& value);

bool typed_list(const TermPtr& type, const TermPtr& t) {
  TermPtr cur = t;
  while (true) {
    if (cur->is_atom() && cur->name == "[]") return true;
    if (!(cur->is_comp() && cur->name == "." && cur->args.size() == 2)) return false;
    if (!apply_type(type, cur->args[0])) return false;
    cur = cur->args[1];
  }
}

bool apply_type(const TermPtr& type, const TermPtr& value) {
  std::vector<TermPtr> args;
  std::string name;
  if (type->is_atom()) {
    name = type->name;
  } else if (type->is_comp()) {
    name = type->name;
    args = type->args;
  } else {
    return false;
  }
  args.push_back(value);
  return eval_resolved_prop(name, args);
}

}  // namespace

bool eval_resolved_prop(const std::string& name, const std::vector<TermPtr>& args) {
  const size_t n = args.size();
  if (name == "any" && n == 1) return true;
  if (name == "ground" && n == 1) return is_ground_term(args[0]);
  if (name == "var" && n == 1) return args[0]->is_var();
  if (name == "nonvar" && n == 1) return !args[0]->is_var();
  if (name == "nonground" && n == 1) return !is_ground_term(args[0]);
  if (name == "ngv" && n == 1) return !args[0]->is_var() && !is_ground_term(args[0]);
  if (name == "num" && n == 1) return args[0]->is_num();
  if (name == "atom" && n == 1) return args[0]->is_atom();
  if (name == "list" && n == 1) return is_proper_list(args[0]);
  if (name == "list" && n == 2) return typed_list(args[0], args[1]);
  if (name == "unreachable" && n == 0) return false;
  if (name == "linear" && n == 1) {
    std::vector<TermPtr> elems;
    if (!list_elements(args[0], elems)) return false;
    if (faults::enabled(faults::Fault::LinearAsDisjoint)) {
      // seeded defect: checks that the terms share no variable pairwise
      for (size_t i = 0; i < elems.size(); ++i) {
        auto vi = term_vars(elems[i]);
        for (size_t j = i + 1; j < elems.size(); ++j) {
          for (int v : term_vars(elems[j]))
            if (std::find(vi.begin(), vi.end(), v) != vi.end()) return false;
        }
      }
      return true;
    }
    for (auto& e : elems)
      if (!is_linear_term(e)) return false;
    return true;
  }
  if (name == "instance" && n == 2) {
    std::map<int, TermPtr> sigma;
    return match_instance(args[1], args[0], sigma);
  }
  if (name == "clique" && n == 1) {
    // A clique conveys permitted sharing; on its own it constrains nothing.
    std::vector<TermPtr> elems;
    return list_elements(args[0], elems);
  }
  throw UnrunnableProperty(name + "/" + std::to_string(n));
}

bool property_known(const std::string& name, int arity) {
  static const std::set<std::pair<std::string, int>> known = {
      {"ground", 1}, {"var", 1},    {"nonvar", 1},  {"nonground", 1}, {"ngv", 1},
      {"any", 1},    {"list", 1},   {"list", 2},    {"num", 1},       {"atom", 1},
      {"mshare", 1}, {"clique", 1}, {"linear", 1},  {"instance", 2},  {"unreachable", 0}};
  return known.count({name, arity}) > 0;
}

bool property_runnable(const std::string& name, int arity) {
  if (name == "clique" && arity == 1 && faults::enabled(faults::Fault::CliqueRtMissing))
    return false;
  if (name == "instance" && arity == 2 && faults::enabled(faults::Fault::InstanceRtMissing))
    return false;
  return property_known(name, arity);
}

namespace {

// Sharing groups of the current binding over the ambient variables: one group
// per runtime variable, listing the ambient vars whose values contain it.
std::vector<std::vector<int>> runtime_groups(const std::vector<int>& ambient, int base,
                                             const Store& store) {
  std::map<int, std::vector<int>> by_runtime_var;  // runtime slot -> ambient vars
  for (int v : ambient) {
    TermPtr resolved = store.resolve({Term::mk_var(v), base});
    for (int u : term_vars(resolved)) {
      auto& grp = by_runtime_var[u];
      if (grp.empty() || grp.back() != v) grp.push_back(v);
    }
  }
  std::vector<std::vector<int>> out;
  std::set<std::vector<int>> seen;
  for (auto& [u, grp] : by_runtime_var)
    if (seen.insert(grp).second) out.push_back(grp);
  return out;
}

bool eval_mshare(const TermPtr& arg, const std::vector<int>& conj_vars,
                 const std::vector<std::set<int>>& cliques, int base, const Store& store) {
  const bool order_fault = faults::enabled(faults::Fault::MshareOrderSensitive);
  const bool clique_fault = faults::enabled(faults::Fault::MshareIgnoresClique);

  std::vector<TermPtr> group_terms;
  if (!list_elements(arg, group_terms)) return false;
  std::vector<std::vector<int>> stated;  // as written in the assertion
  for (auto& g : group_terms) {
    std::vector<TermPtr> vs;
    if (!list_elements(g, vs)) return false;
    std::vector<int> ids;
    for (auto& v : vs) {
      if (!v->is_var()) return false;
      ids.push_back(v->var);
    }
    stated.push_back(std::move(ids));
  }

  std::set<int> clique_covered;
  if (!clique_fault)
    for (auto& k : cliques) clique_covered.insert(k.begin(), k.end());

  std::vector<int> ambient;
  for (int v : conj_vars)
    if (!clique_covered.count(v)) ambient.push_back(v);
  if (order_fault) std::reverse(ambient.begin(), ambient.end());

  auto groups = runtime_groups(ambient, base, store);

  if (order_fault) {
    // seeded defect: groups compared as ordered lists, exactly as written
    for (auto& g : groups) {
      bool found = false;
      for (auto& s : stated)
        if (s == g) found = true;
      if (!found) return false;
    }
    return true;
  }

  std::set<std::set<int>> allowed;
  for (auto& s : stated) allowed.insert(std::set<int>(s.begin(), s.end()));
  for (auto& g : groups) {
    std::set<int> gs(g.begin(), g.end());
    if (allowed.count(gs)) continue;
    bool in_clique = false;
    if (!clique_fault)
      for (auto& k : cliques)
        if (std::includes(k.begin(), k.end(), gs.begin(), gs.end())) in_clique = true;
    if (!in_clique) return false;
  }
  return true;
}

}  // namespace

TermPtr eval_check(const std::vector<TermPtr>& conj, int base, const Store& store) {
  // conjunction-level context for mshare
  std::vector<int> conj_vars;
  for (auto& c : conj) collect_vars(c, conj_vars);
  std::vector<std::set<int>> cliques;
  for (auto& c : conj) {
    if (c->is_comp() && c->name == "clique" && c->args.size() == 1) {
      std::vector<TermPtr> vs;
      if (list_elements(c->args[0], vs)) {
        std::set<int> k;
        for (auto& v : vs)
          if (v->is_var()) k.insert(v->var);
        cliques.push_back(std::move(k));
      }
    }
  }

  for (auto& c : conj) {
    std::string name;
    std::vector<TermPtr> raw_args;
    if (c->is_atom()) {
      name = c->name;
    } else if (c->is_comp()) {
      name = c->name;
      raw_args = c->args;
    } else {
      return c;  // a bare variable or number is never a valid property
    }
    if (!property_runnable(name, (int)raw_args.size()))
      throw UnrunnableProperty(name + "/" + std::to_string(raw_args.size()));

    if (name == "mshare" && raw_args.size() == 1) {
      if (!eval_mshare(raw_args[0], conj_vars, cliques, base, store)) return c;
      continue;
    }
    std::vector<TermPtr> resolved;
    resolved.reserve(raw_args.size());
    for (auto& a : raw_args) resolved.push_back(store.resolve({a, base}));
    if (!eval_resolved_prop(name, resolved)) return c;
  }
  return nullptr;
}

}  // namespace mlp
