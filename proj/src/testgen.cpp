#include "mlp/testgen.hpp"

#include <cstdlib>
#include <map>
#include <sstream>

#include "mlp/props.hpp"

namespace mlp {

namespace {

// generator classes form a small meet-semilattice
struct GClass {
  enum class K { Any, Var, Nonvar, Ground, Num, Atom, List, Empty };
  K k = K::Any;
  std::shared_ptr<GClass> elem;  // for List

  static GClass simple(K k) { return {k, nullptr}; }
  static GClass list_of(GClass e) {
    GClass g;
    g.k = K::List;
    g.elem = std::make_shared<GClass>(std::move(e));
    return g;
  }
  std::string key() const {
    switch (k) {
      case K::Any: return "A";
      case K::Var: return "V";
      case K::Nonvar: return "N";
      case K::Ground: return "G";
      case K::Num: return "n";
      case K::Atom: return "a";
      case K::Empty: return "0";
      case K::List: return "L(" + elem->key() + ")";
    }
    return "?";
  }
};

GClass combine(const GClass& a, const GClass& b) {
  using K = GClass::K;
  if (a.k == K::Any) return b;
  if (b.k == K::Any) return a;
  if (a.k == K::Empty || b.k == K::Empty) return GClass::simple(K::Empty);
  if (a.k == b.k && a.k != K::List) return a;
  auto ordered = [&](K x, K y) { return (a.k == x && b.k == y) || (a.k == y && b.k == x); };
  if (ordered(K::Var, K::Nonvar) || ordered(K::Var, K::Ground) || ordered(K::Var, K::Num) ||
      ordered(K::Var, K::Atom) || ordered(K::Var, K::List))
    return GClass::simple(K::Empty);
  if (ordered(K::Num, K::Atom)) return GClass::simple(K::Empty);
  if (ordered(K::Nonvar, K::Ground)) return GClass::simple(K::Ground);
  if (ordered(K::Nonvar, K::Num)) return GClass::simple(K::Num);
  if (ordered(K::Nonvar, K::Atom)) return GClass::simple(K::Atom);
  if (ordered(K::Ground, K::Num)) return GClass::simple(K::Num);
  if (ordered(K::Ground, K::Atom)) return GClass::simple(K::Atom);
  if (a.k == K::List || b.k == K::List) {
    const GClass& l = a.k == K::List ? a : b;
    const GClass& o = a.k == K::List ? b : a;
    if (o.k == K::Nonvar) return l;
    if (o.k == K::Ground) return GClass::list_of(combine(*l.elem, GClass::simple(K::Ground)));
    if (o.k == K::List) {
      GClass e = combine(*l.elem, *o.elem);
      return GClass::list_of(std::move(e));
    }
    return GClass::simple(K::Empty);  // list vs num/atom
  }
  return GClass::simple(K::Empty);
}

GClass class_of_type(const TermPtr& type) {
  using K = GClass::K;
  if (type->is_atom()) {
    if (type->name == "num") return GClass::simple(K::Num);
    if (type->name == "atom") return GClass::simple(K::Atom);
    if (type->name == "any") return GClass::simple(K::Any);
    if (type->name == "ground") return GClass::simple(K::Ground);
    throw NoGenerator("list element type " + type->name);
  }
  if (type->is_comp() && type->name == "list" && type->args.size() == 1)
    return GClass::list_of(class_of_type(type->args[0]));
  throw NoGenerator("list element type " + term_to_string(type));
}

GClass class_of_prop(const TermPtr& p) {
  using K = GClass::K;
  const std::string& f = p->name;
  int n = p->arity();
  if (f == "any" && n == 1) return GClass::simple(K::Any);
  if (f == "var" && n == 1) return GClass::simple(K::Var);
  if (f == "nonvar" && n == 1) return GClass::simple(K::Nonvar);
  if (f == "ground" && n == 1) return GClass::simple(K::Ground);
  if (f == "num" && n == 1) return GClass::simple(K::Num);
  if (f == "atom" && n == 1) return GClass::simple(K::Atom);
  if (f == "list" && n == 1) return GClass::list_of(GClass::simple(K::Any));
  if (f == "list" && n == 2) return GClass::list_of(class_of_type(p->args[0]));
  throw NoGenerator(f + "/" + std::to_string(n));
}

using Count = unsigned long long;
constexpr Count kCountCap = (Count)1 << 62;
constexpr int kMaxSize = 19;

Count sat_add(Count a, Count b) { return a > kCountCap - b ? kCountCap : a + b; }
Count sat_mul(Count a, Count b) {
  if (a == 0 || b == 0) return 0;
  if (a > kCountCap / b) return kCountCap;
  return a * b;
}

struct Counter {
  const Universe& u;
  std::map<std::string, Count> memo;

  explicit Counter(const Universe& un) : u(un) {}

  Count leaves(GClass::K k) const {
    Count atoms = (Count)u.atoms.size();
    Count ints = (Count)(u.int_max - u.int_min + 1);
    switch (k) {
      case GClass::K::Any: return 1 + atoms + ints;  // var first
      case GClass::K::Var: return 1;
      case GClass::K::Nonvar:
      case GClass::K::Ground: return atoms + ints;
      case GClass::K::Num: return ints;
      case GClass::K::Atom: return atoms;
      default: return 0;
    }
  }

  // number of terms of exactly `size` in the class, at nesting depth `depth`;
  // lists carry a remaining-length budget
  Count count(const GClass& c, int size, int depth, int len_left) {
    using K = GClass::K;
    if (size <= 0) return 0;
    if (c.k == K::Empty) return 0;
    if (c.k == K::List) {
      if (size == 1) return 1;  // []
      if (len_left <= 0 || size < 3) return 0;
      std::ostringstream key;
      key << c.key() << "|" << size << "|" << depth << "|" << len_left;
      auto it = memo.find(key.str());
      if (it != memo.end()) return it->second;
      Count total = 0;
      for (int es = 1; es <= size - 2; ++es) {
        Count ec = count(*c.elem, es, depth + 1, u.max_list_len);
        if (!ec) continue;
        Count tc = count(c, size - 1 - es, depth, len_left - 1);
        total = sat_add(total, sat_mul(ec, tc));
      }
      memo[key.str()] = total;
      return total;
    }
    if (size == 1) return leaves(c.k);
    // compounds f/1 and ./2 (pairs), within the depth bound
    if (depth >= u.max_depth) return 0;
    if (c.k == K::Var || c.k == K::Num || c.k == K::Atom) return 0;
    std::ostringstream key;
    key << c.key() << "|" << size << "|" << depth;
    auto it = memo.find(key.str());
    if (it != memo.end()) return it->second;
    GClass sub = c.k == K::Ground ? GClass::simple(K::Ground) : GClass::simple(K::Any);
    Count total = count(sub, size - 1, depth + 1, u.max_list_len);  // f/1
    for (int ls = 1; ls <= size - 2; ++ls) {                        // ./2
      Count lc = count(sub, ls, depth + 1, u.max_list_len);
      if (!lc) continue;
      Count rc = count(sub, size - 1 - ls, depth + 1, u.max_list_len);
      total = sat_add(total, sat_mul(lc, rc));
    }
    memo[key.str()] = total;
    return total;
  }

  // term with the given index among the class's terms of this size;
  // fresh variables are minted through next_var
  TermPtr unrank(const GClass& c, int size, int depth, int len_left, Count idx, int& next_var) {
    using K = GClass::K;
    if (c.k == K::List) {
      if (size == 1) return Term::nil();
      for (int es = 1; es <= size - 2; ++es) {
        Count ec = count(*c.elem, es, depth + 1, u.max_list_len);
        if (!ec) continue;
        Count tc = count(c, size - 1 - es, depth, len_left - 1);
        Count block = sat_mul(ec, tc);
        if (idx < block) {
          Count ei = idx / tc;
          Count ti = idx % tc;
          TermPtr head = unrank(*c.elem, es, depth + 1, u.max_list_len, ei, next_var);
          TermPtr tail = unrank(c, size - 1 - es, depth, len_left - 1, ti, next_var);
          return Term::cons(head, tail);
        }
        idx -= block;
      }
      return Term::nil();
    }
    if (size == 1) {
      Count atoms = (Count)u.atoms.size();
      if (c.k == K::Var) return Term::mk_var(next_var++, "_");
      if (c.k == K::Any) {
        if (idx == 0) return Term::mk_var(next_var++, "_");
        idx -= 1;
      }
      if (c.k == K::Num) return Term::mk_num(u.int_min + (long long)idx);
      if (idx < atoms) return Term::mk_atom(u.atoms[(size_t)idx]);
      idx -= atoms;
      return Term::mk_num(u.int_min + (long long)idx);
    }
    GClass sub = c.k == K::Ground ? GClass::simple(K::Ground) : GClass::simple(K::Any);
    Count fc = count(sub, size - 1, depth + 1, u.max_list_len);
    if (idx < fc)
      return Term::mk_comp("f", {unrank(sub, size - 1, depth + 1, u.max_list_len, idx, next_var)});
    idx -= fc;
    for (int ls = 1; ls <= size - 2; ++ls) {
      Count lc = count(sub, ls, depth + 1, u.max_list_len);
      if (!lc) continue;
      Count rc = count(sub, size - 1 - ls, depth + 1, u.max_list_len);
      Count block = sat_mul(lc, rc);
      if (idx < block) {
        Count li = idx / rc;
        Count ri = idx % rc;
        TermPtr l = unrank(sub, ls, depth + 1, u.max_list_len, li, next_var);
        TermPtr r = unrank(sub, size - 1 - ls, depth + 1, u.max_list_len, ri, next_var);
        return Term::cons(l, r);
      }
      idx -= block;
    }
    return Term::mk_atom(u.atoms[0]);
  }
};

}  // namespace

Universe universe_from_env() {
  Universe u;
  const char* env = std::getenv("MLP_UNIVERSE");
  if (!env) return u;
  std::string s(env);
  std::istringstream is(s);
  std::string part;
  while (std::getline(is, part, ';')) {
    auto eq = part.find('=');
    if (eq == std::string::npos) continue;
    std::string k = part.substr(0, eq), v = part.substr(eq + 1);
    if (k == "atoms") {
      u.atoms.clear();
      std::istringstream as(v);
      std::string a;
      while (std::getline(as, a, ','))
        if (!a.empty()) u.atoms.push_back(a);
      if (u.atoms.empty()) u.atoms.push_back("a");
    } else if (k == "int") {
      auto dots = v.find("..");
      if (dots != std::string::npos) {
        u.int_min = std::stoll(v.substr(0, dots));
        u.int_max = std::stoll(v.substr(dots + 2));
      }
    } else if (k == "len") {
      u.max_list_len = std::stoi(v);
    } else if (k == "depth") {
      u.max_depth = std::stoi(v);
    }
  }
  return u;
}

GenSpec spec_from_entry(const Assertion& entry, const Universe& u) {
  GenSpec spec;
  spec.pred_name = entry.pred_name();
  spec.arity = entry.pred_arity();
  spec.universe = u;
  spec.arg_props.resize(spec.arity);
  // map head vars to positions
  std::map<int, int> pos;
  for (int i = 0; i < spec.arity; ++i) {
    const TermPtr& a = entry.head->args[i];
    if (a->is_var()) pos[a->var] = i;
  }
  for (auto& c : entry.calls) {
    if (!c->is_comp() || c->arity() == 0) throw NoGenerator(term_to_string(c));
    const TermPtr& target = c->args.back();
    if (!target->is_var() || !pos.count(target->var)) throw NoGenerator(term_to_string(c));
    class_of_prop(c);  // validates support
    spec.arg_props[pos[target->var]].push_back(c);
  }
  return spec;
}

struct Generator::Impl {
  GenSpec spec;
  GenStrategy strategy;
  Rng rng;
  Counter counter;
  std::vector<GClass> classes;
  // breadth-first cursor
  int cur_size;
  Count cur_index = 0;
  Count cur_size_total = 0;
  long long emitted = 0;

  Impl(GenSpec s, GenStrategy st, uint64_t seed)
      : spec(std::move(s)), strategy(st), rng(seed), counter(spec.universe) {
    for (int i = 0; i < spec.arity; ++i) {
      GClass c = GClass::simple(GClass::K::Any);
      for (auto& p : spec.arg_props[i]) c = combine(c, class_of_prop(p));
      classes.push_back(c);
    }
    cur_size = spec.arity == 0 ? 0 : spec.arity;
    cur_size_total = goals_of_total(cur_size);
  }

  // number of goals whose argument sizes sum to `total`
  Count goals_of_total(int total) {
    return tuple_count(0, total);
  }
  Count tuple_count(size_t arg, int total) {
    if (arg == classes.size()) return total == 0 ? 1 : 0;
    Count acc = 0;
    for (int s = 1; s <= total - (int)(classes.size() - arg - 1); ++s) {
      Count c = counter.count(classes[arg], s, 0, spec.universe.max_list_len);
      if (!c) continue;
      acc = sat_add(acc, sat_mul(c, tuple_count(arg + 1, total - s)));
    }
    return acc;
  }

  TermPtr tuple_unrank(size_t arg, int total, Count idx, int& next_var,
                       std::vector<TermPtr>& out) {
    if (arg == classes.size()) return nullptr;
    for (int s = 1; s <= total - (int)(classes.size() - arg - 1); ++s) {
      Count c = counter.count(classes[arg], s, 0, spec.universe.max_list_len);
      if (!c) continue;
      Count rest = tuple_count(arg + 1, total - s);
      if (!rest) continue;
      Count block = sat_mul(c, rest);
      if (idx < block) {
        Count mine = idx / rest;
        Count theirs = idx % rest;
        out.push_back(
            counter.unrank(classes[arg], s, 0, spec.universe.max_list_len, mine, next_var));
        tuple_unrank(arg + 1, total - s, theirs, next_var, out);
        return nullptr;
      }
      idx -= block;
    }
    return nullptr;
  }

  // reuse earlier variables with probability 0.2, so generated inputs carry
  // genuine aliasing for the sharing domains
  TermPtr share_vars(const TermPtr& t, std::vector<TermPtr>& seen) {
    if (t->is_var()) {
      if (!seen.empty() && rng.chance(0.2)) return seen[rng.below(seen.size())];
      seen.push_back(t);
      return t;
    }
    if (t->is_comp()) {
      std::vector<TermPtr> args;
      for (auto& a : t->args) args.push_back(share_vars(a, seen));
      return Term::mk_comp(t->name, std::move(args));
    }
    return t;
  }

  std::optional<TermPtr> next(int* nvars_out) {
    if (spec.arity == 0) {
      if (strategy != GenStrategy::Random && emitted > 0) return std::nullopt;
      emitted++;
      *nvars_out = 0;
      return Term::mk_atom(spec.pred_name);
    }
    int next_var = 0;
    std::vector<TermPtr> args;
    switch (strategy) {
      case GenStrategy::BreadthFirst:
      case GenStrategy::IterativeDeepening: {
        while (cur_index >= cur_size_total) {
          cur_size++;
          if (cur_size > kMaxSize) return std::nullopt;
          cur_index = 0;
          cur_size_total = goals_of_total(cur_size);
        }
        tuple_unrank(0, cur_size, cur_index, next_var, args);
        cur_index++;
        break;
      }
      case GenStrategy::Random: {
        for (int tries = 0;; ++tries) {
          int size = classes.size() +
                     rng.geometric(3.0, kMaxSize - (int)classes.size() - 1);
          Count total = goals_of_total(size);
          if (total == 0) {
            if (tries > 64) {
              // fall back to the smallest populated size
              for (size = (int)classes.size(); size <= kMaxSize; ++size)
                if ((total = goals_of_total(size)) > 0) break;
              if (!total) return std::nullopt;
            } else {
              continue;
            }
          }
          Count idx = total >= kCountCap ? rng.next() % total : rng.below(total);
          args.clear();
          next_var = 0;
          tuple_unrank(0, size, idx, next_var, args);
          break;
        }
        break;
      }
    }
    TermPtr goal = Term::mk_comp(spec.pred_name, args);
    if (strategy == GenStrategy::Random) {
      std::vector<TermPtr> seen;
      goal = share_vars(goal, seen);
    }
    // compact var numbering
    std::map<int, int> ren;
    std::function<TermPtr(const TermPtr&)> renumber = [&](const TermPtr& t) -> TermPtr {
      if (t->is_var()) {
        auto it = ren.find(t->var);
        int id = it == ren.end() ? (int)ren.size() : it->second;
        ren[t->var] = id;
        return Term::mk_var(id, "G" + std::to_string(id));
      }
      if (t->is_comp()) {
        std::vector<TermPtr> as;
        for (auto& a : t->args) as.push_back(renumber(a));
        return Term::mk_comp(t->name, std::move(as));
      }
      return t;
    };
    goal = renumber(goal);
    *nvars_out = (int)ren.size();
    emitted++;
    return goal;
  }
};

Generator::Generator(GenSpec spec, GenStrategy strategy, uint64_t seed)
    : impl_(std::make_shared<Impl>(std::move(spec), strategy, seed)) {}

std::optional<TermPtr> Generator::next(int* nvars_out) { return impl_->next(nvars_out); }

namespace {

struct ShrinkCandidate {
  TermPtr goal;
};

// all goals reachable by one shrink step, in a deterministic order
void shrink_steps(const TermPtr& t, const std::function<TermPtr(const TermPtr&)>& rebuild,
                  std::vector<TermPtr>& out, int& next_var) {
  // number toward zero
  if (t->is_num() && t->num != 0) {
    out.push_back(rebuild(Term::mk_num(0)));
    if (t->num / 2 != 0) out.push_back(rebuild(Term::mk_num(t->num / 2)));
    return;
  }
  if (t->is_comp()) {
    // drop a list element
    if (t->name == "." && t->args.size() == 2)
      out.push_back(rebuild(t->args[1]));  // drop the head
    // replace whole subterm by a fresh variable
    out.push_back(rebuild(Term::mk_var(next_var, "S" + std::to_string(next_var))));
    for (size_t i = 0; i < t->args.size(); ++i) {
      auto sub_rebuild = [&, i](const TermPtr& nt) {
        std::vector<TermPtr> args = t->args;
        args[i] = nt;
        return rebuild(Term::mk_comp(t->name, std::move(args)));
      };
      shrink_steps(t->args[i], sub_rebuild, out, next_var);
    }
    return;
  }
  if (t->is_atom()) {
    out.push_back(rebuild(Term::mk_var(next_var, "S" + std::to_string(next_var))));
  }
}

}  // namespace

TermPtr shrink_goal(const TermPtr& goal, int goal_nvars,
                    const std::function<bool(const TermPtr&, int)>& still_fails,
                    int* out_nvars) {
  TermPtr cur = goal;
  int nvars = goal_nvars;
  bool progress = true;
  int rounds = 0;
  while (progress && rounds++ < 400) {
    progress = false;
    std::vector<TermPtr> cands;
    int next_var = nvars;
    if (cur->is_comp()) {
      for (size_t i = 0; i < cur->args.size(); ++i) {
        auto rebuild = [&, i](const TermPtr& nt) {
          std::vector<TermPtr> args = cur->args;
          args[i] = nt;
          return Term::mk_comp(cur->name, std::move(args));
        };
        shrink_steps(cur->args[i], rebuild, cands, next_var);
      }
    }
    for (auto& cand : cands) {
      int cand_vars = nvars;
      for (int v : term_vars(cand)) cand_vars = std::max(cand_vars, v + 1);
      if (still_fails(cand, cand_vars)) {
        cur = cand;
        nvars = cand_vars;
        progress = true;
        break;
      }
    }
  }
  if (out_nvars) *out_nvars = nvars;
  return cur;
}

}  // namespace mlp
