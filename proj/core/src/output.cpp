#include "effham/output.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace effham {

using nlohmann::json;

std::string format_float(double v) {
    if (v == 0.0) v = 0.0; // fold -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

namespace {

void emit(const json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad_in + json(key).dump() + ": ";
            emit(value, out, indent + 1);
        }
        out += "\n" + pad + "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
        if (flat) {
            out += "[";
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k) out += ", ";
                emit(j[k], out, indent + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k) out += ",\n";
            out += pad_in;
            emit(j[k], out, indent + 1);
        }
        out += "\n" + pad + "]";
        return;
    }
    case json::value_t::number_float: out += format_float(j.get<double>()); return;
    default: out += j.dump(); return;
    }
}

std::string canonical(const json& j) {
    std::string out;
    emit(j, out, 0);
    out += "\n";
    return out;
}

json operator_json(const Operator& op) {
    json entries = json::array();
    const auto& m = op.matrix();
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        for (Operator::Matrix::InnerIterator it(m, r); it; ++it) {
            entries.push_back(json::array({it.row(), it.col(), it.value().real(), it.value().imag()}));
        }
    }
    return {{"dim", op.dim()}, {"entries", std::move(entries)}, {"format", "row, col, re, im"}};
}

json rationals_json(const std::vector<Rational>& v) {
    json out = json::array();
    for (const auto& r : v) out.push_back(r.to_string());
    return out;
}

json tuple_json(const ResonanceTuple& t) {
    json terms = json::array();
    for (auto c : t.components) {
        const auto m = c / 2;
        terms.push_back((c % 2 == 0 ? "h" : "hdag") + std::to_string(m));
    }
    return {{"components", t.components},
            {"terms", std::move(terms)},
            {"nu", rationals_json(t.nu)},
            {"tail_sums", rationals_json(t.tail_sums)},
            {"coefficient", t.coefficient}};
}

json space_json(const std::vector<Factor>& factors) {
    json out = json::array();
    for (const auto& f : factors) {
        if (f.kind == FactorKind::kQubit) {
            out.push_back({{"kind", "qubit"}});
        } else {
            out.push_back({{"kind", "boson"}, {"cutoff", f.dim}});
        }
    }
    return out;
}

} // namespace

std::string canonical_json(const std::string& json_text) { return canonical(json::parse(json_text)); }

std::string derive_json(const EffectiveHamiltonian& h, const FrequencyDecomposition& d,
                        const ScenarioDocument& doc, const DeriveInfo& info) {
    json j;
    j["order"] = h.order;
    j["source"] = info.source;
    j["scenario_hash"] = info.scenario_hash;
    j["tool_version"] = info.tool_version;
    j["scenario"] = json::parse(scenario_to_json(doc));
    j["operator"] = operator_json(h.total);
    j["hermitian_defect"] = hermitian_defect(h.total);
    json ledger = json::array();
    for (const auto& e : h.ledger) {
        auto row = tuple_json(e.tuple);
        row["contribution"] = operator_json(e.contribution);
        ledger.push_back(std::move(row));
    }
    j["ledger"] = std::move(ledger);
    json degenerate = json::array();
    for (const auto& t : h.degeneracy_report) degenerate.push_back(tuple_json(t));
    j["degeneracy_report"] = std::move(degenerate);
    json labels = json::array();
    for (std::size_t i = 0; i < d.space().dim(); ++i) labels.push_back(d.space().format_label(i));
    j["basis_labels"] = std::move(labels);
    return canonical(j);
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t";
    const auto dim = traj.states.empty() ? 0 : traj.states.front().size();
    for (Eigen::Index k = 0; k < dim; ++k) {
        out += ",re(amp_" + std::to_string(k) + "),im(amp_" + std::to_string(k) + ")";
    }
    out += "\n";
    for (std::size_t s = 0; s < traj.states.size(); ++s) {
        out += format_float(traj.times[s]);
        for (Eigen::Index k = 0; k < dim; ++k) {
            out += ",";
            out += format_float(traj.states[s](k).real());
            out += ",";
            out += format_float(traj.states[s](k).imag());
        }
        out += "\n";
    }
    return out;
}

std::string comparison_json(const ComparisonReport& report) {
    json j;
    json rows = json::array();
    for (const auto& o : report.observables) {
        rows.push_back({{"label", o.label},
                        {"index", o.index},
                        {"max_population_deviation", o.max_deviation},
                        {"max_population_full", o.max_population_full},
                        {"max_population_effective", o.max_population_effective},
                        {"frequency_full", o.frequency_full},
                        {"frequency_effective", o.frequency_effective},
                        {"frequency_relative_difference",
                         o.frequency_effective != 0.0
                             ? std::abs(o.frequency_full - o.frequency_effective) / std::abs(o.frequency_effective)
                             : 0.0}});
    }
    j["observables"] = std::move(rows);
    j["fidelity_floor"] = report.min_fidelity;
    j["times"] = report.times;
    j["fidelity"] = report.fidelity;
    return canonical(j);
}

std::string manifest_json(const RunManifest& m) {
    json j;
    j["command_line"] = m.command_line;
    j["scenario_hash"] = m.scenario_hash;
    j["parameters"] = m.parameters;
    j["tool_version"] = m.tool_version;
    j["timestamps"] = {{"started", m.started}, {"finished", m.finished}};
    j["outputs"] = m.outputs;
    j["space"] = space_json(m.space);
    j["labels"] = m.labels;
    j["scenario"] = json::parse(scenario_to_json(m.scenario));
    return canonical(j);
}

} // namespace effham
