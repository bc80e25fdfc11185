#pragma once

#include <map>
#include <stdexcept>

#include "mlp/ast.hpp"
#include "mlp/domain.hpp"

namespace mlp {

struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One multivariant analysis node: a predicate together with one abstract
/// calling context (both call and success are over argument positions).
struct AnalysisNode {
  int id = -1;
  int pred_index = -1;
  AsubPtr call;
  AsubPtr success;

  struct ClauseInfo {
    bool reachable = false;
    std::vector<AsubPtr> points;            // clause entry, after each literal
    std::vector<int> callee_node;           // per body literal, -1 if none
    std::map<int, std::vector<TermPtr>> trust_props;  // point -> emitted conjuncts
  };
  std::vector<ClauseInfo> clauses;
};

struct AnalysisGraph {
  const Domain* domain = nullptr;
  std::vector<AnalysisNode> nodes;
  std::vector<int> entry_nodes;
  std::vector<std::string> warnings;

  std::vector<const AnalysisNode*> nodes_for(int pred_index) const;
  /// Per-source-point claim: lub over all versions (bottom if none reach it).
  AsubPtr point_lub(const Program& prog, int pred_index, int clause_index, int point) const;
};

struct AnalyzeOptions {
  long long max_node_visits = 200000;
};

/// Goal-dependent multivariant fixpoint over the expanded program. Entry
/// assertions seed the call patterns; without any, every predicate gets a
/// top entry.
AnalysisGraph analyze(const Program& prog, const std::string& domain_name,
                      const AnalyzeOptions& opts = {});

/// Concrete-domain analysis from a single concrete entry goal.
AnalysisGraph analyze_concrete(const Program& prog, const TermPtr& goal, int goal_nvars,
                               const AnalyzeOptions& opts = {});

struct AnnotateOptions {
  bool materialize = true;
};

/// Interleaves `true` program-point assertions and per-version `true` pred
/// assertions; with materialize, one renamed predicate copy per calling
/// context, call sites rewritten. version_nodes (optional) receives the
/// emitted predicate name -> analysis node id mapping.
Program annotate(const Program& prog, const AnalysisGraph& graph,
                 const AnnotateOptions& opts = {},
                 std::map<std::string, int>* version_nodes = nullptr);

}  // namespace mlp
