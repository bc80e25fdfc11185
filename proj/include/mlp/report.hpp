#pragma once

#include <string>

#include "mlp/checkify.hpp"

namespace mlp {

/// Versioned JSON report for one checkify run (schema in docs/report_schema.json).
std::string verdict_to_json(const std::string& program, const std::string& domain,
                            uint64_t seed, const TestVerdict& v,
                            const std::vector<std::string>& injected_faults);

}  // namespace mlp
