#pragma once

#include <functional>
#include <optional>
#include <stdexcept>

#include "mlp/ast.hpp"
#include "mlp/rng.hpp"

namespace mlp {

struct NoGenerator : std::runtime_error {
  explicit NoGenerator(const std::string& prop)
      : std::runtime_error("no generator support for property " + prop) {}
};

struct Universe {
  std::vector<std::string> atoms = {"a", "b", "c", "g1", "g2"};
  long long int_min = -4;
  long long int_max = 4;
  int max_list_len = 6;
  int max_depth = 4;
};

/// Reads overrides from the MLP_UNIVERSE environment variable, e.g.
/// "atoms=a,b;int=-2..2;len=4;depth=3".
Universe universe_from_env();

struct GenSpec {
  std::string pred_name;
  int arity = 0;
  // property conjunction per argument position (prop args reference position
  // vars 0..arity-1); derived from the entry assertion's Calls
  std::vector<std::vector<TermPtr>> arg_props;
  Universe universe;
};

/// Spec from a mode-expanded entry assertion. Throws NoGenerator for
/// properties without generator support.
GenSpec spec_from_entry(const Assertion& entry, const Universe& u);

enum class GenStrategy { BreadthFirst, IterativeDeepening, Random };

/// Lazily enumerates goals satisfying the spec. BreadthFirst emits every
/// goal of total size s before any goal of size s+1 and ends when the
/// bounded universe is exhausted; Random is reproducible from the seed.
class Generator {
 public:
  Generator(GenSpec spec, GenStrategy strategy, uint64_t seed);
  /// nullopt when a bounded strategy is exhausted.
  std::optional<TermPtr> next(int* nvars_out);

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// Greedy structural shrinking: drops list elements, replaces subterms by
/// fresh variables, moves numbers toward zero. The result is locally minimal
/// under those moves; still_fails(result) holds.
TermPtr shrink_goal(const TermPtr& goal, int goal_nvars,
                    const std::function<bool(const TermPtr&, int)>& still_fails,
                    int* out_nvars);

}  // namespace mlp
