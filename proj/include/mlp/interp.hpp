#pragma once

#include <string>
#include <vector>

#include "mlp/ast.hpp"
#include "mlp/store.hpp"

namespace mlp {

struct Budget {
  long long steps = 1'000'000;
  int depth = 10'000;
};

struct Solution {
  std::vector<std::pair<std::string, TermPtr>> bindings;  // goal var -> value
};

struct CheckErrorInfo {
  Location loc;
  TermPtr failing;
  std::vector<std::pair<std::string, TermPtr>> witness;  // assertion vars
  int pred_index = -1;
  int clause_index = -1;
  int point = -1;
};

enum class RunKind { Solutions, CheckError, ResourceLimit, RuntimeError };

struct RunOutcome {
  RunKind kind = RunKind::Solutions;
  std::vector<Solution> solutions;  // capped; solution_count has the total
  long long solution_count = 0;
  CheckErrorInfo error;
  std::string message;      // RuntimeError
  bool unrunnable = false;  // RuntimeError was an UnrunnableProperty
  long long steps_used = 0;
};

struct Snapshot {
  int pred_index = -1;
  int clause_index = -1;
  int point = -1;
  std::vector<TermPtr> values;  // clause vars 0..num_vars-1, resolved
};

struct Trace {
  std::vector<Snapshot> snapshots;
  RunOutcome outcome;
};

/// SLD resolution over the program: source clause order, leftmost literal
/// selection, standard cut semantics, occurs check on. Program-point
/// assertion literals are skipped unless evaluate_checks is set.
RunOutcome solve(const Program& prog, const TermPtr& goal, int goal_nvars,
                 const Budget& budget, bool evaluate_checks = false);

/// solve() with check literals routed through eval_check; the first failing
/// check halts execution with a CheckError.
RunOutcome run_instrumented(const Program& prog, const TermPtr& goal, int goal_nvars,
                            const Budget& budget);

/// Same execution as solve(), additionally recording a binding snapshot at
/// every program point reached, including points on branches that later fail.
Trace trace_program(const Program& prog, const TermPtr& goal, int goal_nvars,
                    const Budget& budget);

bool is_builtin(const std::string& name, int arity);

}  // namespace mlp
