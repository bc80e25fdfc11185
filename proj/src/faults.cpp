#include "mlp/faults.hpp"

#include <set>
#include <stdexcept>

namespace mlp::faults {

namespace {
std::set<Fault>& state() {
  static std::set<Fault> s;
  return s;
}
}  // namespace

const std::vector<FaultInfo>& registry() {
  static const std::vector<FaultInfo> reg = {
      {Fault::ModesAliasingBlind, "modes_aliasing_blind", '1', 0,
       "modes unification skips the transitive aliasing update, so instantiating a variable "
       "leaves stale groundness claims on terms containing it",
       Detector::Both, "prepend.mlp", "modes", 7, 100},
      {Fault::LengthMissingNondet, "length_missing_nondet", '1', 4,
       "the catch-all row of the length/2 transfer table is dropped; calls not provably "
       "covered by the remaining rows are inferred to fail",
       Detector::Both, "length_free.mlp", "shfr", 11, 200},
      {Fault::NeqBuiltinWrong, "neq_builtin_wrong", '1', 5,
       "\\=/2 and \\==/2 transfer entries wrongly mark both arguments ground on success",
       Detector::Both, "neq.mlp", "modes", 5, 400},
      {Fault::SpuriousGroundVars, "spurious_ground_vars", '1', 10,
       "sharing-domain property output appends a fresh variable to the emitted ground/1 list",
       Detector::Anatest, "ground_out.mlp", "sharing", 3, 100},
      {Fault::FixpointCutDeadcode, "fixpoint_cut_deadcode", '2', 21,
       "clauses after a cut-carrying clause are skipped by the fixpoint, marking reachable "
       "code dead",
       Detector::Both, "cut_dead.mlp", "modes", 13, 400},
      {Fault::LinearAsDisjoint, "linear_as_disjoint", '3', 7,
       "run-time linear/1 checks pairwise variable disjointness instead of per-term "
       "repeated-variable freedom",
       Detector::Anatest, "linear_alias.mlp", "shfr", 17, 400},
      {Fault::MshareOrderSensitive, "mshare_order_sensitive", '4', 3,
       "run-time mshare/1 compares sharing groups as ordered lists, so a correct analysis "
       "is flagged",
       Detector::Anatest, "share_pair.mlp", "shfr", 19, 400},
      {Fault::CliqueRtMissing, "clique_rt_missing", '4', 9,
       "clique/1 has no run-time implementation; instrumentation fails fast",
       Detector::Anatest, "clique_pair.mlp", "share_clique", 23, 100},
      {Fault::MshareIgnoresClique, "mshare_ignores_clique", '4', 8,
       "run-time mshare/1 keeps considering variables transferred to a clique/1 conjunct "
       "and ignores clique coverage",
       Detector::Anatest, "clique_pair.mlp", "share_clique", 29, 400},
      {Fault::InstanceRtMissing, "instance_rt_missing", '4', 18,
       "instance/2 has no run-time implementation; instrumentation fails fast",
       Detector::Anatest, "depthk_pair.mlp", "depthk", 31, 100},
      {Fault::DepthkGlbNotGreatest, "depthk_glb_not_greatest", '1', 17,
       "depth-k pattern meet mishandles a top right operand and returns bottom instead of "
       "the operand",
       Detector::Both, "depthk_trust.mlp", "depthk", 37, 400},
      {Fault::TrustExpInt, "trust_exp_int", '5', 0,
       "integer exponentiation evaluates to the atom 'undefined' for negative exponents "
       "while its transfer description and a trust assertion still promise a number",
       Detector::Anatest, "trust_exp.mlp", "modes", 41, 800},
  };
  return reg;
}

const FaultInfo* find(const std::string& name) {
  for (auto& f : registry())
    if (name == f.name) return &f;
  return nullptr;
}

#ifdef MLP_DISABLE_FAULTS
void enable(Fault) { throw std::runtime_error("fault injection is compiled out"); }
void disable(Fault) {}
void disable_all() {}
bool enabled(Fault) { return false; }
#else
void enable(Fault f) { state().insert(f); }
void disable(Fault f) { state().erase(f); }
void disable_all() { state().clear(); }
bool enabled(Fault f) { return state().count(f) > 0; }
#endif

}  // namespace mlp::faults
