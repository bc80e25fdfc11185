#include "mlp/analyzer.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "mlp/builtin_table.hpp"
#include "mlp/faults.hpp"
#include "mlp/interp.hpp"
#include "mlp/props.hpp"

namespace mlp {

namespace {

// Normalizes an assertion over its head argument positions: head vars map to
// position vars 0..n-1, remaining assertion vars to n, n+1, ...
struct NormalizedAssertion {
  int arity = 0;
  int total_vars = 0;
  std::vector<TermPtr> calls, success;
  const Assertion* src = nullptr;
};

NormalizedAssertion normalize_assertion(const Assertion& a) {
  NormalizedAssertion out;
  out.src = &a;
  out.arity = a.pred_arity();
  std::vector<TermPtr> ren(a.num_vars);
  int next = out.arity;
  for (int i = 0; i < out.arity; ++i) {
    const TermPtr& arg = a.head->args[i];
    if (!arg->is_var() || (ren[arg->var] != nullptr))
      throw AnalysisError("assertion head must have distinct variable arguments: " +
                          term_to_string(a.head));
    ren[arg->var] = Term::mk_var(i, arg->name);
  }
  for (int v = 0; v < a.num_vars; ++v)
    if (!ren[v]) ren[v] = Term::mk_var(next++, "_E" + std::to_string(v));
  out.total_vars = next;
  for (auto& c : a.calls) out.calls.push_back(subst_vars(c, ren));
  for (auto& s : a.success) out.success.push_back(subst_vars(s, ren));
  return out;
}

void validate_assertion_props(const Program& prog) {
  auto check = [&](const std::vector<TermPtr>& props, const Location& loc) {
    for (auto& p : props) {
      if (p->is_var() || p->is_num())
        throw AnalysisError("invalid property at line " + std::to_string(loc.line));
      if (!property_known(p->name, p->arity()))
        throw AnalysisError("unknown property " + p->name + "/" +
                            std::to_string(p->arity()) + " at line " + std::to_string(loc.line));
    }
  };
  for (auto& a : prog.assertions) {
    check(a.calls, a.loc);
    check(a.success, a.loc);
  }
  for (auto& pred : prog.preds)
    for (auto& cl : pred.clauses)
      for (auto& lit : cl.body)
        if (lit.kind == Literal::Kind::PP) check(lit.pp_conj, lit.loc);
}

struct Engine {
  const Program& prog;
  const Domain& dom;
  AnalyzeOptions opts;
  AnalysisGraph graph;
  std::map<std::pair<int, std::string>, int> node_index;  // (pred, call key)
  std::map<int, std::set<int>> dependents;                // callee node -> caller nodes
  std::deque<int> worklist;
  std::set<int> queued;
  long long visits = 0;
  std::vector<std::vector<NormalizedAssertion>> trusts_by_pred;

  Engine(const Program& p, const Domain& d, AnalyzeOptions o) : prog(p), dom(d), opts(o) {
    graph.domain = &dom;
    trusts_by_pred.resize(prog.preds.size());
    for (auto& a : prog.assertions) {
      if (a.status != AStatus::Trust) continue;
      const Predicate* pr = prog.find_pred(a.pred_name(), a.pred_arity());
      if (!pr) continue;
      int pi = (int)(pr - prog.preds.data());
      trusts_by_pred[pi].push_back(normalize_assertion(a));
    }
  }

  int find_pred(const std::string& name, int arity) const {
    for (size_t i = 0; i < prog.preds.size(); ++i)
      if (prog.preds[i].name == name && prog.preds[i].arity == arity) return (int)i;
    return -1;
  }

  int get_node(int pred_index, const AsubPtr& call) {
    auto key = std::make_pair(pred_index, call->to_string());
    auto it = node_index.find(key);
    if (it != node_index.end()) return it->second;
    AnalysisNode node;
    node.id = (int)graph.nodes.size();
    node.pred_index = pred_index;
    node.call = call;
    node.success = dom.bottom(prog.preds[pred_index].arity);
    node.clauses.resize(prog.preds[pred_index].clauses.size());
    graph.nodes.push_back(std::move(node));
    node_index[key] = graph.nodes.size() - 1;
    enqueue((int)graph.nodes.size() - 1);
    return (int)graph.nodes.size() - 1;
  }

  void enqueue(int id) {
    if (queued.insert(id).second) worklist.push_back(id);
  }

  AsubPtr apply_trusts(int pred_index, const std::vector<TermPtr>& args, const AsubPtr& call_pat,
                       AsubPtr succ, AnalysisNode::ClauseInfo* info, int point) {
    for (auto& tr : trusts_by_pred[pred_index]) {
      bool applicable = true;
      for (auto& c : tr.calls)
        if (dom.entails(c, *call_pat) != Entail::Yes) applicable = false;
      if (!applicable || tr.success.empty()) continue;
      AsubPtr tr_asub = dom.abstract_props(tr.success, tr.total_vars);
      std::vector<int> keep;
      for (int i = 0; i < tr.arity; ++i) keep.push_back(i);
      AsubPtr tr_proj = dom.project(*tr_asub, keep);
      succ = dom.glb(*succ, *tr_proj);
      if (info) {
        // the trusted claim is part of the analyzer's knowledge at the point
        // after the call; it is emitted verbatim so run-time checking sees it
        std::vector<TermPtr> ren(tr.total_vars);
        for (int i = 0; i < tr.arity; ++i) ren[i] = args[i];
        int fresh = 100000 + point * 100;
        for (int v = tr.arity; v < tr.total_vars; ++v)
          ren[v] = Term::mk_var(fresh + v, "_T" + std::to_string(v));
        for (auto& s : tr.success) info->trust_props[point].push_back(subst_vars(s, ren));
      }
    }
    return succ;
  }

  void process(int node_id) {
    if (++visits > opts.max_node_visits)
      throw AnalysisError("iteration limit exceeded in fixpoint computation");
    const Predicate& pred = prog.preds[graph.nodes[node_id].pred_index];
    AsubPtr call = graph.nodes[node_id].call;
    AsubPtr success_acc;
    bool cut_stop = false;

    for (size_t ci = 0; ci < pred.clauses.size(); ++ci) {
      AnalysisNode::ClauseInfo info;
      info.callee_node.assign(pred.clauses[ci].body.size(), -1);
      const Clause& cl = pred.clauses[ci];
      if (cut_stop) {
        graph.nodes[node_id].clauses[ci] = std::move(info);
        continue;
      }
      std::vector<TermPtr> head_args =
          cl.head->is_comp() ? cl.head->args : std::vector<TermPtr>{};
      AsubPtr cur = dom.entry_from_call(*call, head_args, cl.num_vars);
      info.reachable = !dom.is_bottom(*cur);
      info.points.push_back(cur);
      bool has_cut = false;

      for (size_t li = 0; li < cl.body.size(); ++li) {
        const Literal& lit = cl.body[li];
        if (lit.kind == Literal::Kind::PP) continue;
        if (lit.kind == Literal::Kind::Cut) {
          has_cut = true;
          info.points.push_back(cur);
          continue;
        }
        const TermPtr& g = lit.goal;
        std::vector<TermPtr> args = g->is_comp() ? g->args : std::vector<TermPtr>{};
        if (dom.is_bottom(*cur)) {
          info.points.push_back(cur);
          continue;
        }
        if (g->name == "=" && g->arity() == 2) {
          cur = dom.abstract_unify(g->args[0], g->args[1], *cur);
        } else if (g->name == "true" && g->arity() == 0) {
          // identity
        } else if (is_builtin(g->name, g->arity())) {
          if (!builtin_transfer_desc(g->name, g->arity()) && g->name != "=") {
            std::string w = "no transfer description for builtin " + g->name + "/" +
                            std::to_string(g->arity()) + "; assuming top success";
            if (std::find(graph.warnings.begin(), graph.warnings.end(), w) ==
                graph.warnings.end())
              graph.warnings.push_back(w);
          }
          cur = dom.transfer_builtin(g->name, args, *cur);
          cur = apply_trusts_builtin(g, args, cur, &info, (int)info.points.size());
        } else {
          int pi = find_pred(g->name, g->arity());
          if (pi < 0)
            throw AnalysisError("undefined predicate " + g->name + "/" +
                                std::to_string(g->arity()));
          AsubPtr call_pat = dom.restrict_call(args, *cur);
          int callee = get_node(pi, call_pat);
          info.callee_node[li] = callee;
          dependents[callee].insert(node_id);
          AsubPtr succ = graph.nodes[callee].success;
          succ = apply_trusts(pi, args, call_pat, succ, &info, (int)info.points.size());
          cur = dom.apply_success(args, *cur, *succ);
        }
        info.points.push_back(cur);
      }

      // clause exit contributes to the node success
      if (!dom.is_bottom(*info.points.back())) {
        AsubPtr head_succ = dom.exit_to_head(*info.points.back(), head_args);
        success_acc = success_acc ? dom.lub(*success_acc, *head_succ) : head_succ;
      }
      graph.nodes[node_id].clauses[ci] = std::move(info);

      if (has_cut && faults::enabled(faults::Fault::FixpointCutDeadcode) &&
          graph.nodes[node_id].clauses[ci].reachable)
        cut_stop = true;  // seeded defect: later clauses treated as dead
    }

    AsubPtr new_succ = success_acc ? success_acc : dom.bottom(pred.arity);
    AsubPtr widened = dom.widen(*graph.nodes[node_id].success, *new_succ);
    if (!dom.equal(*widened, *graph.nodes[node_id].success)) {
      graph.nodes[node_id].success = widened;
      for (int dep : dependents[node_id]) enqueue(dep);
    }
  }

  AsubPtr apply_trusts_builtin(const TermPtr& g, const std::vector<TermPtr>& args, AsubPtr cur,
                               AnalysisNode::ClauseInfo* info, int point) {
    int pi = find_pred(g->name, g->arity());
    std::vector<NormalizedAssertion>* trs = nullptr;
    std::vector<NormalizedAssertion> local;
    if (pi >= 0) {
      trs = &trusts_by_pred[pi];
    } else {
      for (auto& a : prog.assertions)
        if (a.status == AStatus::Trust && a.pred_name() == g->name &&
            a.pred_arity() == g->arity())
          local.push_back(normalize_assertion(a));
      trs = &local;
    }
    if (trs->empty()) return cur;
    AsubPtr call_pat = dom.restrict_call(args, *cur);
    for (auto& tr : *trs) {
      bool applicable = true;
      for (auto& c : tr.calls)
        if (dom.entails(c, *call_pat) != Entail::Yes) applicable = false;
      if (!applicable || tr.success.empty()) continue;
      AsubPtr tr_asub = dom.abstract_props(tr.success, tr.total_vars);
      std::vector<int> keep;
      for (int i = 0; i < tr.arity; ++i) keep.push_back(i);
      AsubPtr succ_pat = dom.project(*tr_asub, keep);
      cur = dom.apply_success(args, *cur, *succ_pat);
      if (info) {
        std::vector<TermPtr> ren(tr.total_vars);
        for (int i = 0; i < tr.arity; ++i) ren[i] = args[i];
        int fresh = 100000 + point * 100;
        for (int v = tr.arity; v < tr.total_vars; ++v)
          ren[v] = Term::mk_var(fresh + v, "_T" + std::to_string(v));
        for (auto& s : tr.success) info->trust_props[point].push_back(subst_vars(s, ren));
      }
    }
    return cur;
  }

  void run_entries(const std::vector<std::pair<int, AsubPtr>>& entries) {
    for (auto& [pi, asub] : entries) graph.entry_nodes.push_back(get_node(pi, asub));
    while (!worklist.empty()) {
      int id = worklist.front();
      worklist.pop_front();
      queued.erase(id);
      process(id);
    }
  }
};

}  // namespace

std::vector<const AnalysisNode*> AnalysisGraph::nodes_for(int pred_index) const {
  std::vector<const AnalysisNode*> out;
  for (auto& n : nodes)
    if (n.pred_index == pred_index) out.push_back(&n);
  return out;
}

AsubPtr AnalysisGraph::point_lub(const Program& prog, int pred_index, int clause_index,
                                 int point) const {
  const Clause& cl = prog.preds[pred_index].clauses[clause_index];
  AsubPtr acc = domain->bottom(cl.num_vars);
  for (auto& n : nodes) {
    if (n.pred_index != pred_index) continue;
    const auto& info = n.clauses[clause_index];
    if ((int)info.points.size() > point)
      acc = domain->lub(*acc, *info.points[point]);
  }
  return acc;
}

AnalysisGraph analyze(const Program& prog, const std::string& domain_name,
                      const AnalyzeOptions& opts) {
  const Domain* dom = get_domain(domain_name);
  if (!dom) throw AnalysisError("unknown domain '" + domain_name + "'");
  validate_assertion_props(prog);
  Engine eng(prog, *dom, opts);

  std::vector<std::pair<int, AsubPtr>> entries;
  for (auto& a : prog.assertions) {
    if (a.status != AStatus::Entry) continue;
    int pi = eng.find_pred(a.pred_name(), a.pred_arity());
    if (pi < 0)
      throw AnalysisError("entry assertion for undefined predicate " + a.pred_name());
    NormalizedAssertion na = normalize_assertion(a);
    AsubPtr asub = dom->abstract_props(na.calls, na.total_vars);
    std::vector<int> keep;
    for (int i = 0; i < na.arity; ++i) keep.push_back(i);
    entries.push_back({pi, dom->project(*asub, keep)});
  }
  if (entries.empty())
    for (size_t pi = 0; pi < prog.preds.size(); ++pi)
      entries.push_back({(int)pi, dom->top(prog.preds[pi].arity)});

  try {
    eng.run_entries(entries);
  } catch (const DomainError& e) {
    throw AnalysisError(std::string("domain error: ") + e.what());
  }
  return std::move(eng.graph);
}

AnalysisGraph analyze_concrete(const Program& prog, const TermPtr& goal, int goal_nvars,
                               const AnalyzeOptions& opts) {
  const Domain* dom = get_domain("concrete");
  validate_assertion_props(prog);
  Engine eng(prog, *dom, opts);
  if (!goal->is_comp() && !goal->is_atom()) throw AnalysisError("entry goal must be callable");
  int pi = eng.find_pred(goal->name, goal->arity());
  if (pi < 0) throw AnalysisError("entry goal predicate undefined");
  std::vector<TermPtr> args = goal->is_comp() ? goal->args : std::vector<TermPtr>{};
  AsubPtr start = dom->fresh(goal_nvars);
  AsubPtr call_pat = dom->restrict_call(args, *start);
  try {
    eng.run_entries({{pi, call_pat}});
  } catch (const DomainError& e) {
    throw AnalysisError(std::string("domain error: ") + e.what());
  }
  return std::move(eng.graph);
}

namespace {

// Anonymous variables cannot be referenced by the emitted annotations (each
// `_` reparses as a fresh variable), so annotated clauses give them names.
TermPtr name_anon_vars(const TermPtr& t) {
  if (t->is_var())
    return t->name == "_" ? Term::mk_var(t->var, "_U" + std::to_string(t->var)) : t;
  if (t->is_comp()) {
    std::vector<TermPtr> args;
    for (auto& a : t->args) args.push_back(name_anon_vars(a));
    return Term::mk_comp(t->name, std::move(args));
  }
  return t;
}

Clause name_anon_vars(const Clause& cl) {
  Clause out = cl;
  out.head = name_anon_vars(cl.head);
  for (auto& lit : out.body) {
    if (lit.kind == Literal::Kind::Goal) lit.goal = name_anon_vars(lit.goal);
    if (lit.kind == Literal::Kind::PP)
      for (auto& c : lit.pp_conj) c = name_anon_vars(c);
  }
  return out;
}

// display var terms for a pred assertion head, preferring source names
std::vector<TermPtr> head_var_terms(const Predicate& pred) {
  std::vector<TermPtr> out;
  if (!pred.clauses.empty() && pred.clauses[0].head->is_comp()) {
    const auto& args = pred.clauses[0].head->args;
    bool all_distinct_vars = true;
    std::set<int> seen;
    for (auto& a : args) {
      if (!a->is_var() || !seen.insert(a->var).second) all_distinct_vars = false;
    }
    if (all_distinct_vars && (int)args.size() == pred.arity) {
      for (size_t i = 0; i < args.size(); ++i)
        out.push_back(Term::mk_var((int)i, args[i]->name));
      return out;
    }
  }
  for (int i = 0; i < pred.arity; ++i) out.push_back(Term::mk_var(i, "A" + std::to_string(i + 1)));
  return out;
}

int max_var_in(const TermPtr& t) {
  int m = -1;
  for (int v : term_vars(t)) m = std::max(m, v);
  return m;
}

}  // namespace

Program annotate(const Program& prog, const AnalysisGraph& graph, const AnnotateOptions& opts,
                 std::map<std::string, int>* version_nodes) {
  const Domain& dom = *graph.domain;
  Program out;
  out.modedefs = prog.modedefs;

  // entry + user assertions survive unchanged
  for (auto& a : prog.assertions)
    if (a.status != AStatus::True) out.assertions.push_back(a);

  struct Version {
    const AnalysisNode* node;
    std::string out_name;
  };
  std::map<int, std::vector<Version>> versions;  // pred index -> versions
  std::map<int, bool> collapse_pred;             // emit one lubbed copy
  std::map<int, std::string> node_out_name;

  std::vector<PredId> exported = prog.exports();
  for (size_t pi = 0; pi < prog.preds.size(); ++pi) {
    auto ns = graph.nodes_for((int)pi);
    std::vector<Version> vs;
    bool is_exported = false;
    for (auto& e : exported)
      if (e.name == prog.preds[pi].name && e.arity == prog.preds[pi].arity) is_exported = true;
    if (!opts.materialize || ns.size() <= 1) {
      for (auto* n : ns) vs.push_back({n, prog.preds[pi].name});
    } else {
      // the version reached from the program entry keeps the original name
      int entry_version = -1, entry_count = 0;
      for (int en : graph.entry_nodes)
        for (size_t k = 0; k < ns.size(); ++k)
          if (ns[k]->id == en) {
            entry_version = (int)k;
            entry_count++;
          }
      if (entry_count > 1) {
        // several entry contexts on one predicate cannot be materialized
        // under a single callable name; keep it collapsed
        collapse_pred[(int)pi] = true;
        for (auto* n : ns) vs.push_back({n, prog.preds[pi].name});
        for (auto& v : vs) node_out_name[v.node->id] = v.out_name;
        versions[(int)pi] = std::move(vs);
        continue;
      }
      int counter = 0;
      for (size_t k = 0; k < ns.size(); ++k) {
        std::string nm;
        if ((int)k == entry_version && is_exported)
          nm = prog.preds[pi].name;
        else
          nm = prog.preds[pi].name + "_v" + std::to_string(++counter);
        vs.push_back({ns[k], nm});
      }
    }
    for (auto& v : vs) node_out_name[v.node->id] = v.out_name;
    versions[(int)pi] = std::move(vs);
  }
  if (version_nodes)
    for (auto& [pi, vs] : versions)
      for (auto& v : vs) (*version_nodes)[v.out_name] = v.node->id;

  for (size_t pi = 0; pi < prog.preds.size(); ++pi) {
    const Predicate& pred = prog.preds[pi];
    auto& vs = versions[(int)pi];
    std::vector<TermPtr> hvars = head_var_terms(pred);

    auto emit_copy = [&](const std::string& name, const AnalysisNode* node) {
      // pred assertion (collapsed: lub over versions)
      AsubPtr call_pat, succ_pat;
      if (node) {
        call_pat = node->call;
        succ_pat = node->success;
      } else {
        for (auto& v : vs) {
          call_pat = call_pat ? dom.lub(*call_pat, *v.node->call) : v.node->call;
          succ_pat = succ_pat ? dom.lub(*succ_pat, *v.node->success) : v.node->success;
        }
      }
      if (call_pat) {
        Assertion a;
        a.status = AStatus::True;
        std::vector<TermPtr> head_args = hvars;
        a.head = pred.arity == 0 ? Term::mk_atom(name) : Term::mk_comp(name, head_args);
        a.calls = dom.to_properties(*call_pat, hvars);
        a.success = dom.to_properties(*succ_pat, hvars);
        int maxv = pred.arity - 1;
        for (auto& c : a.calls) maxv = std::max(maxv, max_var_in(c));
        for (auto& s : a.success) maxv = std::max(maxv, max_var_in(s));
        a.num_vars = maxv + 1;
        a.loc = pred.clauses.empty() ? Location{} : pred.clauses[0].loc;
        out.assertions.push_back(std::move(a));
      }

      Predicate np;
      np.name = name;
      np.arity = pred.arity;
      for (size_t ci = 0; ci < pred.clauses.size(); ++ci) {
        const Clause cl = name_anon_vars(pred.clauses[ci]);
        Clause nc;
        nc.loc = cl.loc;
        nc.head = name == pred.name
                      ? cl.head
                      : (cl.head->is_comp() ? Term::mk_comp(name, cl.head->args)
                                            : Term::mk_atom(name));
        std::vector<TermPtr> vterms = cl.var_terms();
        int next_var = cl.num_vars;

        auto point_asub = [&](int point) -> AsubPtr {
          if (node) {
            const auto& info = node->clauses[ci];
            if ((int)info.points.size() > point) return info.points[point];
            return dom.bottom(cl.num_vars);
          }
          return graph.point_lub(prog, (int)pi, (int)ci, point);
        };
        auto trust_extra = [&](int point) {
          std::vector<TermPtr> extra;
          auto collect = [&](const AnalysisNode* n) {
            auto it = n->clauses[ci].trust_props.find(point);
            if (it != n->clauses[ci].trust_props.end())
              for (auto& t : it->second) extra.push_back(t);
          };
          if (node)
            collect(node);
          else
            for (auto& v : vs) collect(v.node);
          return extra;
        };
        auto mk_pp = [&](int point) {
          AsubPtr a = point_asub(point);
          std::vector<TermPtr> conj = dom.to_properties(*a, vterms);
          if (!dom.is_bottom(*a))
            for (auto& t : trust_extra(point)) conj.push_back(t);
          // renumber any fresh vars (patterns, trust extras) into clause vars
          std::map<int, int> ren;
          std::vector<TermPtr> fixed;
          std::function<TermPtr(const TermPtr&)> fix = [&](const TermPtr& t) -> TermPtr {
            if (t->is_var()) {
              if (t->var < cl.num_vars) return t;
              auto it = ren.find(t->var);
              int id;
              if (it == ren.end()) {
                id = next_var++;
                ren[t->var] = id;
              } else {
                id = it->second;
              }
              return Term::mk_var(id, t->name);
            }
            if (t->is_comp()) {
              std::vector<TermPtr> as;
              for (auto& x : t->args) as.push_back(fix(x));
              return Term::mk_comp(t->name, std::move(as));
            }
            return t;
          };
          for (auto& c : conj) fixed.push_back(fix(c));
          return Literal::mk_pp(AStatus::True, std::move(fixed), cl.loc);
        };
        auto push_pp = [&](int point) {
          Literal pp = mk_pp(point);
          if (!pp.pp_conj.empty()) nc.body.push_back(std::move(pp));
        };

        int point = 0;
        push_pp(point);
        for (size_t li = 0; li < cl.body.size(); ++li) {
          const Literal& lit = cl.body[li];
          if (lit.kind == Literal::Kind::PP) {
            nc.body.push_back(lit);  // user annotation kept in place
            continue;
          }
          if (lit.kind == Literal::Kind::Cut) {
            nc.body.push_back(lit);
            point++;
            push_pp(point);
            continue;
          }
          // rewrite call sites to the callee version's name
          Literal lg = lit;
          if (node) {
            int callee = node->clauses[ci].callee_node[li];
            if (callee >= 0) {
              const std::string& nm = node_out_name[callee];
              if (nm != lit.goal->name)
                lg.goal = lit.goal->is_comp() ? Term::mk_comp(nm, lit.goal->args)
                                              : Term::mk_atom(nm);
            }
          }
          nc.body.push_back(lg);
          point++;
          push_pp(point);
        }
        nc.num_vars = next_var;
        np.clauses.push_back(std::move(nc));
      }
      out.preds.push_back(std::move(np));
    };

    if (vs.empty()) {
      // predicate unreachable under the entries: annotate as dead code
      Predicate np;
      np.name = pred.name;
      np.arity = pred.arity;
      for (auto& cl0 : pred.clauses) {
        const Clause cl = name_anon_vars(cl0);
        Clause nc = cl;
        std::vector<Literal> body;
        auto unre = [&]() {
          return Literal::mk_pp(AStatus::True, {Term::mk_atom("unreachable")}, cl.loc);
        };
        body.push_back(unre());
        for (auto& lit : cl.body) {
          if (lit.kind == Literal::Kind::PP) {
            body.push_back(lit);
            continue;
          }
          body.push_back(lit);
          body.push_back(unre());
        }
        nc.body = std::move(body);
        np.clauses.push_back(std::move(nc));
      }
      out.preds.push_back(std::move(np));
      continue;
    }
    if ((!opts.materialize || collapse_pred.count((int)pi)) && vs.size() > 1) {
      emit_copy(pred.name, nullptr);
    } else {
      for (auto& v : vs) emit_copy(v.out_name, v.node);
    }
  }
  return out;
}

}  // namespace mlp
