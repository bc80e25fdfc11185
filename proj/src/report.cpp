#include "mlp/report.hpp"

#include "json.hpp"

namespace mlp {

std::string verdict_to_json(const std::string& program, const std::string& domain,
                            uint64_t seed, const TestVerdict& v,
                            const std::vector<std::string>& injected_faults) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["program"] = program;
  j["domain"] = domain;
  j["seed"] = seed;
  j["verdict"] = verdict_name(v.verdict);
  j["cases_run"] = v.cases_run;
  j["wall_time_ms"] = v.wall_ms;
  j["analysis_ms"] = v.analysis_ms;
  j["injected_faults"] = injected_faults;
  if (v.verdict == Verdict::Error) {
    j["location"] = {{"file", program}, {"line", v.loc.line}, {"col", v.loc.col}};
    j["failing_property"] = term_to_string(v.failing);
    j["predicate"] = v.base_pred;
    j["clause"] = v.clause_index;
    j["point"] = v.point;
    j["analysis_node"] = v.node_id;
    nlohmann::json w = nlohmann::json::object();
    for (auto& [name, value] : v.witness) w[name] = term_to_string(value);
    j["witness"] = w;
    j["input"] = term_to_string(v.input);
    j["shrunk_witness"] = term_to_string(v.shrunk);
  }
  if (v.verdict == Verdict::AnalysisFailed) {
    j["message"] = v.message;
    j["unrunnable_property"] = v.unrunnable;
  }
  return j.dump(2);
}

}  // namespace mlp
