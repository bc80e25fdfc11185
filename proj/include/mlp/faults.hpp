#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mlp::faults {

enum class Fault {
  ModesAliasingBlind,
  LengthMissingNondet,
  NeqBuiltinWrong,
  SpuriousGroundVars,
  FixpointCutDeadcode,
  LinearAsDisjoint,
  MshareOrderSensitive,
  CliqueRtMissing,
  MshareIgnoresClique,
  InstanceRtMissing,
  DepthkGlbNotGreatest,
  TrustExpInt,
};

enum class Detector { Anatest, Containment, Both };

struct FaultInfo {
  Fault id;
  const char* name;
  char bug_class;  // I..V as 1..5 tags: '1','2','3','4','5'
  int ref;         // catalog number of the upstream defect this reproduces
  const char* description;
  Detector detector;
  // Bundled detection scenario:
  const char* scenario_file;  // relative to the corpus scenarios dir
  const char* domain;
  unsigned seed;
  int max_cases;
};

const std::vector<FaultInfo>& registry();
const FaultInfo* find(const std::string& name);

struct UnknownFault : std::runtime_error {
  explicit UnknownFault(const std::string& n)
      : std::runtime_error("unknown fault '" + n + "'") {}
};

void enable(Fault f);
void disable(Fault f);
void disable_all();
bool enabled(Fault f);

/// RAII guard for test scenarios.
struct Injection {
  Fault f;
  explicit Injection(Fault f_) : f(f_) { enable(f); }
  ~Injection() { disable(f); }
};

}  // namespace mlp::faults
