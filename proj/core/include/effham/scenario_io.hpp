// scenario_io.hpp — JSON scenario files
//
//   { "space": [{"kind": "qubit"} | {"kind": "boson", "cutoff": N}, ...],
//     "base_frequency": "omega_c",
//     "params": {"lambda": 0.05, ...},
//     "terms": [{"omega": "2", "h": "lambda*a(1)*sp(0)"}, ...] }
//
// "omega" is a "p/q" rational or a decimal string; decimals that need a
// denominator above 10^6 are rejected.

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "effham/decomposition.hpp"

namespace effham {

struct ScenarioTermSpec {
    std::string omega;
    std::string h;
};

struct ScenarioDocument {
    std::vector<Factor> space;
    std::string base_frequency;
    std::map<std::string, double> params;
    std::vector<ScenarioTermSpec> terms;
};

ScenarioDocument parse_scenario_json(std::string_view text);
ScenarioDocument load_scenario_file(const std::string& path);

// Canonical JSON (sorted keys, two-space indent, trailing newline).
std::string scenario_to_json(const ScenarioDocument& doc);

FrequencyDecomposition build_decomposition(const ScenarioDocument& doc);

// 64-bit FNV-1a over the canonical JSON, as 16 hex digits.
std::string scenario_hash(const ScenarioDocument& doc);

} // namespace effham
