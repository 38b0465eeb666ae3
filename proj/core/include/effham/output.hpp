// output.hpp — Deterministic JSON/CSV serialisation of results
//
// JSON keys are sorted, floats are written as %.12e, rationals as "p/q"
// strings. Identical inputs give byte-identical files.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "effham/dynamics.hpp"
#include "effham/effective.hpp"
#include "effham/scenario_io.hpp"

namespace effham {

// Re-emits arbitrary JSON text in canonical form.
std::string canonical_json(const std::string& json_text);

std::string format_float(double v);

struct DeriveInfo {
    std::string scenario_hash;
    std::string source; // preset name or scenario path
    std::string tool_version;
};

std::string derive_json(const EffectiveHamiltonian& h, const FrequencyDecomposition& d,
                        const ScenarioDocument& doc, const DeriveInfo& info);

// Header "t,re(amp_0),im(amp_0),...", one row per sample.
std::string trajectory_csv(const Trajectory& traj);

std::string comparison_json(const ComparisonReport& report);

struct RunManifest {
    std::vector<std::string> command_line;
    std::string scenario_hash;
    std::map<std::string, std::string> parameters;
    std::string tool_version;
    std::string started;
    std::string finished;
    std::vector<std::string> outputs;
    std::vector<Factor> space;
    std::vector<std::string> labels;
    ScenarioDocument scenario;
};

std::string manifest_json(const RunManifest& manifest);

} // namespace effham
