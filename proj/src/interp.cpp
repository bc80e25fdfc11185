#include "mlp/interp.hpp"

#include <optional>
#include <set>

#include "mlp/faults.hpp"
#include "mlp/props.hpp"

namespace mlp {

namespace {

struct ArithError {
  std::string msg;
};

struct ArithValue {
  long long v = 0;
  bool undefined = false;  // TrustExpInt fault: negative exponent
};

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithError{"integer overflow"};
  return r;
}

ArithValue eval_arith(BTerm bt, const Store& store) {
  bt = store.walk(bt);
  const TermPtr& t = bt.t;
  if (t->is_num()) return {t->num, false};
  if (t->is_var()) throw ArithError{"unbound variable in arithmetic"};
  if (t->is_comp() && t->args.size() == 2) {
    ArithValue a = eval_arith({t->args[0], bt.base}, store);
    ArithValue b = eval_arith({t->args[1], bt.base}, store);
    if (a.undefined || b.undefined) return {0, true};
    long long r;
    if (t->name == "+") {
      if (__builtin_add_overflow(a.v, b.v, &r)) throw ArithError{"integer overflow"};
      return {r, false};
    }
    if (t->name == "-") {
      if (__builtin_sub_overflow(a.v, b.v, &r)) throw ArithError{"integer overflow"};
      return {r, false};
    }
    if (t->name == "*") return {checked_mul(a.v, b.v), false};
    if (t->name == "//") {
      if (b.v == 0) throw ArithError{"division by zero"};
      return {a.v / b.v, false};
    }
    if (t->name == "mod") {
      if (b.v == 0) throw ArithError{"division by zero"};
      long long m = a.v % b.v;
      if (m != 0 && ((m < 0) != (b.v < 0))) m += b.v;
      return {m, false};
    }
    if (t->name == "**") {
      if (b.v < 0) {
        if (faults::enabled(faults::Fault::TrustExpInt)) return {0, true};
        throw ArithError{"negative exponent in **"};
      }
      long long acc = 1;
      for (long long i = 0; i < b.v; ++i) acc = checked_mul(acc, a.v);
      return {acc, false};
    }
  }
  if (t->is_comp() && t->args.size() == 1 && t->name == "-") {
    ArithValue a = eval_arith({t->args[0], bt.base}, store);
    if (a.undefined) return a;
    return {-a.v, false};
  }
  if (t->is_comp() && t->args.size() == 1 && t->name == "+")
    return eval_arith({t->args[0], bt.base}, store);
  throw ArithError{"not an arithmetic expression: " + term_to_string(t)};
}

struct GoalItem {
  enum class K { Call, Cut, PP, Note };
  K kind;
  // Call
  TermPtr goal;
  int base = 0;
  int cut_barrier = 0;
  // PP / Note coordinates
  const Literal* pp = nullptr;
  int pred_index = -1;
  int clause_index = -1;
  int point = -1;
  const Clause* clause = nullptr;
};

struct ChoicePoint {
  enum class K { Clauses, LengthEnum };
  K kind;
  std::vector<GoalItem> goals;
  size_t trail_mark = 0;
  size_t store_size = 0;
  // Clauses
  TermPtr goal;
  int base = 0;
  int cut_barrier = 0;
  int pred_index = -1;
  size_t next_clause = 0;
  // LengthEnum
  long long next_len = 0;
};

constexpr int kMaxStoredSolutions = 64;

struct Machine {
  const Program& prog;
  Budget budget;
  bool checks;
  bool tracing;
  Store store;
  std::vector<GoalItem> goals;
  std::vector<ChoicePoint> cps;
  long long steps = 0;
  Trace* trace_out = nullptr;

  Machine(const Program& p, const Budget& b, bool ch, bool tr)
      : prog(p), budget(b), checks(ch), tracing(tr) {}

  bool out_of_budget() const {
    return steps >= budget.steps || (int)goals.size() > budget.depth;
  }

  void push_body(const Clause& cl, int base, int pred_index, int clause_index,
                 int cut_barrier) {
    std::vector<GoalItem> items;
    int point = 0;
    if (tracing) {
      GoalItem n;
      n.kind = GoalItem::K::Note;
      n.base = base;
      n.pred_index = pred_index;
      n.clause_index = clause_index;
      n.point = point;
      n.clause = &cl;
      items.push_back(n);
    }
    for (auto& lit : cl.body) {
      switch (lit.kind) {
        case Literal::Kind::Goal: {
          GoalItem g;
          g.kind = GoalItem::K::Call;
          g.goal = lit.goal;
          g.base = base;
          g.cut_barrier = cut_barrier;
          items.push_back(g);
          point++;
          break;
        }
        case Literal::Kind::Cut: {
          GoalItem g;
          g.kind = GoalItem::K::Cut;
          g.cut_barrier = cut_barrier;
          items.push_back(g);
          point++;
          break;
        }
        case Literal::Kind::PP: {
          GoalItem g;
          g.kind = GoalItem::K::PP;
          g.pp = &lit;
          g.base = base;
          g.pred_index = pred_index;
          g.clause_index = clause_index;
          g.point = point;
          g.clause = &cl;
          items.push_back(g);
          continue;  // PP literals are not program points
        }
      }
      if (tracing) {
        GoalItem n;
        n.kind = GoalItem::K::Note;
        n.base = base;
        n.pred_index = pred_index;
        n.clause_index = clause_index;
        n.point = point;
        n.clause = &cl;
        items.push_back(n);
      }
    }
    for (auto it = items.rbegin(); it != items.rend(); ++it) goals.push_back(*it);
  }

  int find_pred_index(const std::string& name, int arity) const {
    for (size_t i = 0; i < prog.preds.size(); ++i)
      if (prog.preds[i].name == name && prog.preds[i].arity == arity) return (int)i;
    return -1;
  }

  // Tries clauses of pred starting at from; pushes a retry choice point when
  // alternatives remain. Returns false if no clause head unifies.
  bool try_clauses(int pred_index, const TermPtr& goal, int base, size_t from) {
    const Predicate& pred = prog.preds[pred_index];
    for (size_t idx = from; idx < pred.clauses.size(); ++idx) {
      const Clause& cl = pred.clauses[idx];
      size_t tm = store.mark();
      size_t ss = store.size();
      int cbase = store.fresh(cl.num_vars);
      if (store.unify({cl.head, cbase}, {goal, base})) {
        int barrier = (int)cps.size();
        if (idx + 1 < pred.clauses.size()) {
          ChoicePoint cp;
          cp.kind = ChoicePoint::K::Clauses;
          cp.goals = goals;
          cp.trail_mark = tm;
          cp.store_size = ss;
          cp.goal = goal;
          cp.base = base;
          cp.pred_index = pred_index;
          cp.next_clause = idx + 1;
          cps.push_back(std::move(cp));
        }
        push_body(cl, cbase, pred_index, (int)idx, barrier);
        return true;
      }
      store.undo(tm);
      store.shrink(ss);
    }
    return false;
  }

  // Backtracks to the most recent choice point; returns false when none left.
  bool backtrack() {
    while (!cps.empty()) {
      ChoicePoint cp = std::move(cps.back());
      cps.pop_back();
      store.undo(cp.trail_mark);
      store.shrink(cp.store_size);
      goals = cp.goals;
      steps++;
      if (cp.kind == ChoicePoint::K::Clauses) {
        if (try_clauses(cp.pred_index, cp.goal, cp.base, cp.next_clause)) return true;
      } else {
        if (length_enum(cp.goal, cp.base, cp.next_len)) return true;
      }
    }
    return false;
  }

  // length(L, N) with both sides open: enumerate list lengths.
  bool length_enum(const TermPtr& goal, int base, long long n) {
    size_t tm = store.mark();
    size_t ss = store.size();
    {
      ChoicePoint cp;
      cp.kind = ChoicePoint::K::LengthEnum;
      cp.goals = goals;
      cp.trail_mark = tm;
      cp.store_size = ss;
      cp.goal = goal;
      cp.base = base;
      cp.next_len = n + 1;
      cps.push_back(std::move(cp));
    }
    int vb = store.fresh((int)n);
    TermPtr lst = Term::nil();
    for (long long i = n - 1; i >= 0; --i) lst = Term::cons(Term::mk_var((int)i), lst);
    if (store.unify({goal->args[0], base}, {lst, vb}) &&
        store.unify({goal->args[1], base}, {Term::mk_num(n), 0}))
      return true;
    // undo handled by the choice point we just pushed
    return backtrack();
  }

  std::optional<bool> builtin(const TermPtr& g, int base, RunOutcome& out) {
    const std::string& f = g->name;
    int n = g->arity();
    auto arith = [&](const TermPtr& t) { return eval_arith({t, base}, store); };

    if (f == "true" && n == 0) return true;
    if ((f == "fail" || f == "false") && n == 0) return false;
    if (f == "=" && n == 2) return store.unify({g->args[0], base}, {g->args[1], base});
    if (f == "\\=" && n == 2) {
      size_t tm = store.mark();
      bool ok = store.unify({g->args[0], base}, {g->args[1], base});
      store.undo(tm);
      return !ok;
    }
    if ((f == "==" || f == "\\==") && n == 2) {
      bool eq = struct_eq(store.resolve({g->args[0], base}), store.resolve({g->args[1], base}));
      return f == "==" ? eq : !eq;
    }
    if (f == "is" && n == 2) {
      try {
        ArithValue v = arith(g->args[1]);
        TermPtr result = v.undefined ? Term::mk_atom("undefined") : Term::mk_num(v.v);
        return store.unify({g->args[0], base}, {result, 0});
      } catch (const ArithError& e) {
        out.kind = RunKind::RuntimeError;
        out.message = "arithmetic error: " + e.msg;
        return std::nullopt;
      }
    }
    if ((f == "<" || f == ">" || f == "=<" || f == ">=" || f == "=:=" || f == "=\\=") &&
        n == 2) {
      try {
        ArithValue a = arith(g->args[0]);
        ArithValue b = arith(g->args[1]);
        if (a.undefined || b.undefined) {
          out.kind = RunKind::RuntimeError;
          out.message = "arithmetic error: undefined value in comparison";
          return std::nullopt;
        }
        if (f == "<") return a.v < b.v;
        if (f == ">") return a.v > b.v;
        if (f == "=<") return a.v <= b.v;
        if (f == ">=") return a.v >= b.v;
        if (f == "=:=") return a.v == b.v;
        return a.v != b.v;
      } catch (const ArithError& e) {
        out.kind = RunKind::RuntimeError;
        out.message = "arithmetic error: " + e.msg;
        return std::nullopt;
      }
    }
    if (f == "length" && n == 2) {
      // spine status: proper, partial (cons chain ending in a var), other
      long long prefix = 0;
      BTerm cur = store.walk({g->args[0], base});
      while (cur.t->is_comp() && cur.t->name == "." && cur.t->args.size() == 2) {
        prefix++;
        cur = store.walk({cur.t->args[1], cur.base});
      }
      bool proper = cur.t->is_atom() && cur.t->name == "[]";
      bool partial = cur.t->is_var();
      if (proper) return store.unify({g->args[1], base}, {Term::mk_num(prefix), 0});
      if (!partial) return false;
      BTerm len = store.walk({g->args[1], base});
      if (len.t->is_num()) {
        long long want = len.t->num;
        if (want < prefix) return false;
        int vb = store.fresh((int)want);
        TermPtr fresh = Term::nil();
        for (long long i = want - 1; i >= 0; --i)
          fresh = Term::cons(Term::mk_var((int)i), fresh);
        return store.unify({g->args[0], base}, {fresh, vb});
      }
      if (!len.t->is_var()) return false;
      return length_enum(g, base, prefix);
    }
    if (f == "arg" && n == 3) {
      BTerm nn = store.walk({g->args[0], base});
      BTerm tt = store.walk({g->args[1], base});
      if (nn.t->is_var() || tt.t->is_var()) {
        out.kind = RunKind::RuntimeError;
        out.message = "arg/3: insufficiently instantiated";
        return std::nullopt;
      }
      if (!nn.t->is_num() || !tt.t->is_comp()) return false;
      long long i = nn.t->num;
      if (i < 1 || i > (long long)tt.t->args.size()) return false;
      return store.unify({g->args[2], base}, {tt.t->args[i - 1], tt.base});
    }
    if (n == 1 && (f == "num" || f == "atom" || f == "var" || f == "nonvar" ||
                   f == "ground" || f == "list" || f == "nonground")) {
      TermPtr r = store.resolve({g->args[0], base});
      return eval_resolved_prop(f, {r});
    }
    return std::nullopt;  // not a builtin -- caller checks
  }

  RunOutcome run(const TermPtr& goal, int goal_nvars) {
    RunOutcome out;
    int qbase = store.fresh(goal_nvars);
    std::vector<std::pair<int, std::string>> qnames;
    {
      std::set<int> seen;
      std::vector<TermPtr> todo{goal};
      while (!todo.empty()) {
        TermPtr t = todo.back();
        todo.pop_back();
        if (t->is_var() && !seen.count(t->var)) {
          seen.insert(t->var);
          qnames.push_back({t->var, t->name});
        } else if (t->is_comp()) {
          for (auto it = t->args.rbegin(); it != t->args.rend(); ++it) todo.push_back(*it);
        }
      }
    }

    GoalItem g0;
    g0.kind = GoalItem::K::Call;
    g0.goal = goal;
    g0.base = qbase;
    g0.cut_barrier = 0;
    goals.push_back(g0);

    for (;;) {
      if (out_of_budget()) {
        out.kind = RunKind::ResourceLimit;
        out.steps_used = steps;
        return out;
      }
      if (goals.empty()) {
        out.solution_count++;
        if ((int)out.solutions.size() < kMaxStoredSolutions) {
          Solution s;
          for (auto& [v, name] : qnames)
            s.bindings.push_back({name, store.resolve({Term::mk_var(v), qbase})});
          out.solutions.push_back(std::move(s));
        }
        if (!backtrack()) {
          out.kind = RunKind::Solutions;
          out.steps_used = steps;
          return out;
        }
        continue;
      }
      GoalItem item = std::move(goals.back());
      goals.pop_back();
      switch (item.kind) {
        case GoalItem::K::Note:
          if (trace_out) {
            Snapshot snap;
            snap.pred_index = item.pred_index;
            snap.clause_index = item.clause_index;
            snap.point = item.point;
            const Clause& cl = *item.clause;
            for (int v = 0; v < cl.num_vars; ++v)
              snap.values.push_back(store.resolve({Term::mk_var(v), item.base}));
            trace_out->snapshots.push_back(std::move(snap));
          }
          continue;
        case GoalItem::K::PP: {
          if (!checks || item.pp->pp_status != AStatus::Check) continue;
          steps++;
          try {
            TermPtr failing = eval_check(item.pp->pp_conj, item.base, store);
            if (!failing) continue;
            out.kind = RunKind::CheckError;
            out.error.loc = item.pp->loc;
            out.error.failing = failing;
            out.error.pred_index = item.pred_index;
            out.error.clause_index = item.clause_index;
            out.error.point = item.point;
            std::set<int> seen;
            for (auto& c : item.pp->pp_conj) {
              std::vector<TermPtr> todo{c};
              while (!todo.empty()) {
                TermPtr t = todo.back();
                todo.pop_back();
                if (t->is_var() && !seen.count(t->var)) {
                  seen.insert(t->var);
                  out.error.witness.push_back(
                      {t->name, store.resolve({t, item.base})});
                } else if (t->is_comp()) {
                  for (auto& a : t->args) todo.push_back(a);
                }
              }
            }
            out.steps_used = steps;
            return out;
          } catch (const UnrunnableProperty& e) {
            out.kind = RunKind::RuntimeError;
            out.message = e.what();
            out.unrunnable = true;
            out.steps_used = steps;
            return out;
          }
        }
        case GoalItem::K::Cut:
          if ((int)cps.size() > item.cut_barrier) cps.resize(item.cut_barrier);
          continue;
        case GoalItem::K::Call: {
          steps++;
          BTerm w = store.walk({item.goal, item.base});
          if (w.t->is_var()) {
            out.kind = RunKind::RuntimeError;
            out.message = "call to unbound goal";
            out.steps_used = steps;
            return out;
          }
          if (w.t->is_num()) {
            out.kind = RunKind::RuntimeError;
            out.message = "call to a number";
            out.steps_used = steps;
            return out;
          }
          TermPtr g = w.t;
          int base = w.base;
          if (g->is_atom() && g->name == "!") {
            if ((int)cps.size() > item.cut_barrier) cps.resize(item.cut_barrier);
            continue;
          }
          std::optional<bool> b = builtin(g, base, out);
          if (out.kind == RunKind::RuntimeError) {
            out.steps_used = steps;
            return out;
          }
          if (b.has_value()) {
            if (*b) continue;
            if (!backtrack()) {
              out.kind = RunKind::Solutions;
              out.steps_used = steps;
              return out;
            }
            continue;
          }
          int pi = find_pred_index(g->name, g->arity());
          if (pi < 0) {
            out.kind = RunKind::RuntimeError;
            out.message = "undefined predicate " + g->name + "/" + std::to_string(g->arity());
            out.steps_used = steps;
            return out;
          }
          if (!try_clauses(pi, g, base, 0)) {
            if (!backtrack()) {
              out.kind = RunKind::Solutions;
              out.steps_used = steps;
              return out;
            }
          }
          continue;
        }
      }
    }
  }
};

}  // namespace

bool is_builtin(const std::string& name, int arity) {
  static const std::set<std::pair<std::string, int>> tbl = {
      {"true", 0},  {"fail", 0},  {"false", 0}, {"=", 2},     {"\\=", 2},   {"==", 2},
      {"\\==", 2},  {"is", 2},    {"<", 2},     {">", 2},     {"=<", 2},    {">=", 2},
      {"=:=", 2},   {"=\\=", 2},  {"length", 2}, {"arg", 3},  {"num", 1},   {"atom", 1},
      {"var", 1},   {"nonvar", 1}, {"ground", 1}, {"list", 1}, {"nonground", 1}};
  return tbl.count({name, arity}) > 0;
}

RunOutcome solve(const Program& prog, const TermPtr& goal, int goal_nvars,
                 const Budget& budget, bool evaluate_checks) {
  Machine m(prog, budget, evaluate_checks, false);
  return m.run(goal, goal_nvars);
}

RunOutcome run_instrumented(const Program& prog, const TermPtr& goal, int goal_nvars,
                            const Budget& budget) {
  return solve(prog, goal, goal_nvars, budget, true);
}

Trace trace_program(const Program& prog, const TermPtr& goal, int goal_nvars,
                    const Budget& budget) {
  Trace tr;
  Machine m(prog, budget, false, true);
  m.trace_out = &tr;
  tr.outcome = m.run(goal, goal_nvars);
  return tr;
}

}  // namespace mlp
