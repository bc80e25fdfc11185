#pragma once

#include <map>

#include "mlp/analyzer.hpp"
#include "mlp/ast.hpp"
#include "mlp/interp.hpp"
#include "mlp/testgen.hpp"

namespace mlp {

struct CheckifyConfig {
  std::string domain = "modes";
  int max_cases = 100;
  Budget per_case_budget{};
  long long wall_clock_ms = 60'000;
  uint64_t seed = 0;
  bool materialize = true;
  enum class UserChecks { Ignore, Trust } user_checks = UserChecks::Ignore;
  Universe universe{};
};

enum class Verdict { Pass, Error, Timeout, AnalysisFailed };

const char* verdict_name(Verdict v);

struct TestVerdict {
  Verdict verdict = Verdict::Pass;
  int cases_run = 0;
  long long wall_ms = 0;
  long long analysis_ms = 0;

  // Error payload
  TermPtr input;
  int input_nvars = 0;
  TermPtr shrunk;
  int shrunk_nvars = 0;
  Location loc;
  TermPtr failing;
  std::vector<std::pair<std::string, TermPtr>> witness;
  std::string base_pred;  // source predicate of the failing check
  int clause_index = -1;
  int point = -1;  // -1 for pred-level (wrapper) checks
  int node_id = -1;

  // AnalysisFailed payload
  std::string message;
  bool unrunnable = false;
};

/// Replaces every `true` assertion status (pred and program point) by
/// `check`; entry and trust assertions are preserved; pre-existing user
/// `check` assertions are dropped or turned into trusts.
Program flip_status(const Program& annotated, CheckifyConfig::UserChecks user_checks);

/// Compiles pred-level check assertions into wrapper predicates and verifies
/// that every checked property has a run-time implementation (fails fast
/// with UnrunnableProperty otherwise). Program-point checks are already
/// executable literals.
Program instrument(const Program& flipped);

/// The end-to-end driver: analyze, flip, instrument, then generate and run
/// test cases until a check fires, the budget is exhausted, or max_cases
/// pass. Seed-deterministic.
TestVerdict anatest(const Program& prog, const CheckifyConfig& config);

struct ContainmentViolation {
  int pred_index = -1;
  int clause_index = -1;
  int point = -1;
  std::vector<TermPtr> snapshot;
  TermPtr input;
};

/// Independent containment oracle: runs the traced interpreter over the
/// given inputs and tests every snapshot for gamma-membership in the
/// analysis claim at that point. Shares nothing with flip/instrument or the
/// runnable-property implementations.
std::vector<ContainmentViolation> containment_check(
    const Program& prog, const AnalysisGraph& graph,
    const std::vector<std::pair<TermPtr, int>>& inputs, const Budget& budget);

/// The annotate -> print -> reparse -> flip -> instrument pipeline used by
/// anatest, exposed for tests and the CLI. version_nodes maps emitted
/// predicate names to analysis node ids.
struct Pipeline {
  Program expanded;
  AnalysisGraph graph;
  Program annotated;       // reparsed from text, real locations
  std::string annotated_text;
  Program instrumented;
  std::map<std::string, int> version_nodes;
};
Pipeline build_pipeline(const Program& prog, const CheckifyConfig& config);

}  // namespace mlp
