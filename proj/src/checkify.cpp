#include "mlp/checkify.hpp"

#include <algorithm>
#include <chrono>

#include "mlp/modes_expand.hpp"
#include "mlp/parser.hpp"
#include "mlp/printer.hpp"
#include "mlp/props.hpp"

namespace mlp {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Error: return "error";
    case Verdict::Timeout: return "timeout";
    case Verdict::AnalysisFailed: return "analysis_failed";
  }
  return "?";
}

Program flip_status(const Program& annotated, CheckifyConfig::UserChecks user_checks) {
  Program out;
  out.modedefs = annotated.modedefs;
  for (auto& a : annotated.assertions) {
    Assertion na = a;
    if (a.status == AStatus::True) {
      na.status = AStatus::Check;
    } else if (a.status == AStatus::Check) {
      if (user_checks == CheckifyConfig::UserChecks::Ignore) continue;
      na.status = AStatus::Trust;
    }
    out.assertions.push_back(std::move(na));
  }
  for (auto& p : annotated.preds) {
    Predicate np;
    np.name = p.name;
    np.arity = p.arity;
    for (auto& cl : p.clauses) {
      Clause nc = cl;
      nc.body.clear();
      for (auto& lit : cl.body) {
        if (lit.kind != Literal::Kind::PP) {
          nc.body.push_back(lit);
          continue;
        }
        Literal nl = lit;
        if (lit.pp_status == AStatus::True) {
          nl.pp_status = AStatus::Check;
        } else if (lit.pp_status == AStatus::Check) {
          if (user_checks == CheckifyConfig::UserChecks::Ignore) continue;
          nl.pp_status = AStatus::Trust;
        }
        nc.body.push_back(std::move(nl));
      }
      np.clauses.push_back(std::move(nc));
    }
    out.preds.push_back(std::move(np));
  }
  return out;
}

namespace {

void scan_runnable(const std::vector<TermPtr>& conj) {
  for (auto& c : conj) {
    if (c->is_var() || c->is_num()) throw UnrunnableProperty(term_to_string(c));
    if (!property_runnable(c->name, c->arity()))
      throw UnrunnableProperty(c->name + "/" + std::to_string(c->arity()));
  }
}

}  // namespace

Program instrument(const Program& flipped) {
  // fail fast on properties without a run-time implementation
  for (auto& p : flipped.preds)
    for (auto& cl : p.clauses)
      for (auto& lit : cl.body)
        if (lit.kind == Literal::Kind::PP && lit.pp_status == AStatus::Check)
          scan_runnable(lit.pp_conj);
  for (auto& a : flipped.assertions)
    if (a.status == AStatus::Check) {
      scan_runnable(a.calls);
      scan_runnable(a.success);
    }

  Program out;
  out.modedefs = flipped.modedefs;
  for (auto& a : flipped.assertions)
    if (a.status != AStatus::Check) out.assertions.push_back(a);

  for (auto& p : flipped.preds) {
    std::vector<const Assertion*> checks;
    for (auto& a : flipped.assertions)
      if (a.status == AStatus::Check && a.pred_name() == p.name && a.pred_arity() == p.arity)
        checks.push_back(&a);
    if (checks.empty()) {
      out.preds.push_back(p);
      continue;
    }
    // wrapper: p(A..) :- check(Calls), p__i(A..), check(Success).
    std::string inner = p.name + "__i";
    Predicate renamed;
    renamed.name = inner;
    renamed.arity = p.arity;
    for (auto& cl : p.clauses) {
      Clause nc = cl;
      nc.head = cl.head->is_comp() ? Term::mk_comp(inner, cl.head->args) : Term::mk_atom(inner);
      renamed.clauses.push_back(std::move(nc));
    }

    Predicate wrapper;
    wrapper.name = p.name;
    wrapper.arity = p.arity;
    Clause wc;
    const Assertion& a = *checks.front();
    // head vars 0..n-1 with the assertion's names; extra assertion vars after
    std::vector<TermPtr> ren(a.num_vars);
    std::vector<TermPtr> head_args;
    for (int i = 0; i < p.arity; ++i) {
      const TermPtr& hv = a.head->args[i];
      TermPtr v = Term::mk_var(i, hv->is_var() ? hv->name : "A" + std::to_string(i + 1));
      if (hv->is_var()) ren[hv->var] = v;
      head_args.push_back(v);
    }
    int next = p.arity;
    for (int v = 0; v < a.num_vars; ++v)
      if (!ren[v]) ren[v] = Term::mk_var(next++, "_W" + std::to_string(v));
    wc.head = p.arity == 0 ? Term::mk_atom(p.name) : Term::mk_comp(p.name, head_args);
    wc.loc = a.loc;
    if (!a.calls.empty()) {
      std::vector<TermPtr> conj;
      for (auto& c : a.calls) conj.push_back(subst_vars(c, ren));
      wc.body.push_back(Literal::mk_pp(AStatus::Check, std::move(conj), a.loc));
    }
    wc.body.push_back(Literal::mk_goal(
        p.arity == 0 ? Term::mk_atom(inner) : Term::mk_comp(inner, head_args), a.loc));
    if (!a.success.empty()) {
      std::vector<TermPtr> conj;
      for (auto& s : a.success) conj.push_back(subst_vars(s, ren));
      wc.body.push_back(Literal::mk_pp(AStatus::Check, std::move(conj), a.loc));
    }
    wc.num_vars = next;
    wrapper.clauses.push_back(std::move(wc));
    out.preds.push_back(std::move(wrapper));
    out.preds.push_back(std::move(renamed));
  }
  return out;
}

Pipeline build_pipeline(const Program& prog, const CheckifyConfig& config) {
  Pipeline pl;
  pl.expanded = expand_modes(prog);
  pl.graph = analyze(pl.expanded, config.domain);
  AnnotateOptions aopts;
  aopts.materialize = config.materialize;
  Program annotated = annotate(pl.expanded, pl.graph, aopts, &pl.version_nodes);
  // print and reparse so check literals carry real source locations and the
  // source-to-source contract (valid .mlp output) is exercised on every run
  pl.annotated_text = print_program(annotated);
  pl.annotated = parse_program(pl.annotated_text);
  Program flipped = flip_status(pl.annotated, config.user_checks);
  pl.instrumented = instrument(flipped);
  return pl;
}

namespace {

std::string base_pred_name(const std::string& name) {
  std::string n = name;
  if (n.size() > 3 && n.compare(n.size() - 3, 3, "__i") == 0) n = n.substr(0, n.size() - 3);
  auto pos = n.rfind("_v");
  if (pos != std::string::npos && pos + 2 < n.size()) {
    bool digits = true;
    for (size_t i = pos + 2; i < n.size(); ++i)
      if (!isdigit((unsigned char)n[i])) digits = false;
    if (digits) n = n.substr(0, pos);
  }
  return n;
}

}  // namespace

TestVerdict anatest(const Program& prog, const CheckifyConfig& config) {
  using Clock = std::chrono::steady_clock;
  auto t0 = Clock::now();
  auto elapsed_ms = [&]() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
  };
  TestVerdict out;

  Pipeline pl;
  try {
    pl = build_pipeline(prog, config);
  } catch (const AnalysisError& e) {
    out.verdict = Verdict::AnalysisFailed;
    out.message = e.what();
    out.wall_ms = elapsed_ms();
    return out;
  } catch (const UnrunnableProperty& e) {
    out.verdict = Verdict::AnalysisFailed;
    out.message = e.what();
    out.unrunnable = true;
    out.wall_ms = elapsed_ms();
    return out;
  } catch (const ParseError& e) {
    out.verdict = Verdict::AnalysisFailed;
    out.message = std::string("annotated output malformed: ") + e.what();
    out.wall_ms = elapsed_ms();
    return out;
  }
  out.analysis_ms = elapsed_ms();

  // generation specs from the entry assertions (or every predicate when the
  // program declares no admissible inputs)
  std::vector<GenSpec> specs;
  try {
    std::vector<const Assertion*> entries;
    for (auto& a : pl.expanded.assertions)
      if (a.status == AStatus::Entry) entries.push_back(&a);
    if (!entries.empty()) {
      for (auto* a : entries) specs.push_back(spec_from_entry(*a, config.universe));
    } else {
      for (auto& p : pl.expanded.preds) {
        GenSpec s;
        s.pred_name = p.name;
        s.arity = p.arity;
        s.arg_props.resize(p.arity);
        s.universe = config.universe;
        specs.push_back(std::move(s));
      }
    }
  } catch (const NoGenerator& e) {
    out.verdict = Verdict::AnalysisFailed;
    out.message = e.what();
    out.wall_ms = elapsed_ms();
    return out;
  }
  if (specs.empty()) {
    out.verdict = Verdict::Pass;
    out.wall_ms = elapsed_ms();
    return out;
  }

  auto run_case = [&](const TermPtr& goal, int nvars) {
    return run_instrumented(pl.instrumented, goal, nvars, config.per_case_budget);
  };

  for (int i = 0; i < config.max_cases; ++i) {
    if (elapsed_ms() > config.wall_clock_ms) {
      out.verdict = Verdict::Timeout;
      out.cases_run = i;
      out.wall_ms = elapsed_ms();
      return out;
    }
    size_t which = specs.size() == 1 ? 0 : i % specs.size();
    Generator gen(specs[which], GenStrategy::Random, Rng::mix(config.seed, (uint64_t)i));
    int nvars = 0;
    auto goal = gen.next(&nvars);
    if (!goal) continue;
    RunOutcome r = run_case(*goal, nvars);
    out.cases_run = i + 1;
    if (r.kind == RunKind::RuntimeError && r.unrunnable) {
      out.verdict = Verdict::AnalysisFailed;
      out.message = r.message;
      out.unrunnable = true;
      out.wall_ms = elapsed_ms();
      return out;
    }
    if (r.kind != RunKind::CheckError) continue;

    // a check fired: the analysis (or its plumbing) is convicted
    out.verdict = Verdict::Error;
    out.input = *goal;
    out.input_nvars = nvars;
    out.loc = r.error.loc;
    out.failing = r.error.failing;
    out.witness = r.error.witness;
    out.clause_index = r.error.clause_index;
    const Program& ip = pl.instrumented;
    std::string iname = r.error.pred_index >= 0 ? ip.preds[r.error.pred_index].name : "";
    int iarity = r.error.pred_index >= 0 ? ip.preds[r.error.pred_index].arity : 0;
    out.base_pred = base_pred_name(iname);
    bool inner = iname.size() > 3 && iname.compare(iname.size() - 3, 3, "__i") == 0;
    bool is_wrapper = !inner && ip.find_pred(iname + "__i", iarity) != nullptr;
    out.point = is_wrapper ? -1 : r.error.point;
    std::string version_name = inner ? iname.substr(0, iname.size() - 3) : iname;
    auto vn = pl.version_nodes.find(version_name);
    if (vn != pl.version_nodes.end()) out.node_id = vn->second;

    Location want = r.error.loc;
    auto still_fails = [&](const TermPtr& g, int nv) {
      RunOutcome rr = run_case(g, nv);
      return rr.kind == RunKind::CheckError && rr.error.loc == want;
    };
    out.shrunk = shrink_goal(*goal, nvars, still_fails, &out.shrunk_nvars);
    out.wall_ms = elapsed_ms();
    return out;
  }
  out.verdict = Verdict::Pass;
  out.wall_ms = elapsed_ms();
  return out;
}

std::vector<ContainmentViolation> containment_check(
    const Program& prog, const AnalysisGraph& graph,
    const std::vector<std::pair<TermPtr, int>>& inputs, const Budget& budget) {
  std::vector<ContainmentViolation> out;
  for (auto& [goal, nvars] : inputs) {
    Trace tr = trace_program(prog, goal, nvars, budget);
    for (auto& snap : tr.snapshots) {
      AsubPtr claim = graph.point_lub(prog, snap.pred_index, snap.clause_index, snap.point);
      if (!graph.domain->gamma_member(snap.values, *claim)) {
        ContainmentViolation v;
        v.pred_index = snap.pred_index;
        v.clause_index = snap.clause_index;
        v.point = snap.point;
        v.snapshot = snap.values;
        v.input = goal;
        out.push_back(std::move(v));
      }
    }
  }
  return out;
}

}  // namespace mlp
