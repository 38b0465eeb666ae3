#include "effham/scenario_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "effham/errors.hpp"
#include "effham/expr_parser.hpp"
#include "effham/output.hpp"

namespace effham {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw InvalidArgument("scenario: " + what); }

} // namespace

ScenarioDocument parse_scenario_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& err) {
        throw ParseError(std::string("scenario JSON: ") + err.what(), err.byte);
    }
    if (!j.is_object()) bad("top level must be an object");

    ScenarioDocument doc;
    if (!j.contains("space") || !j["space"].is_array()) bad("'space' must be an array");
    for (const auto& f : j["space"]) {
        if (!f.is_object() || !f.contains("kind") || !f["kind"].is_string()) bad("space factor needs a 'kind'");
        const auto kind = f["kind"].get<std::string>();
        if (kind == "qubit") {
            doc.space.push_back(Factor::qubit());
        } else if (kind == "boson") {
            if (!f.contains("cutoff") || !f["cutoff"].is_number_integer()) bad("boson factor needs an integer 'cutoff'");
            doc.space.push_back(Factor::boson(f["cutoff"].get<int>()));
        } else {
            bad("unknown factor kind '" + kind + "'");
        }
    }

    if (j.contains("base_frequency")) {
        if (!j["base_frequency"].is_string()) bad("'base_frequency' must be a string label");
        doc.base_frequency = j["base_frequency"].get<std::string>();
    }
    if (j.contains("params")) {
        if (!j["params"].is_object()) bad("'params' must be an object");
        for (const auto& [name, value] : j["params"].items()) {
            if (!value.is_number()) bad("parameter '" + name + "' must be a real number");
            doc.params[name] = value.get<double>();
        }
    }
    if (!j.contains("terms") || !j["terms"].is_array()) bad("'terms' must be an array");
    for (const auto& t : j["terms"]) {
        if (!t.is_object() || !t.contains("omega") || !t.contains("h")) bad("each term needs 'omega' and 'h'");
        ScenarioTermSpec spec;
        if (t["omega"].is_string()) {
            spec.omega = t["omega"].get<std::string>();
        } else if (t["omega"].is_number_integer()) {
            spec.omega = std::to_string(t["omega"].get<long long>());
        } else {
            bad("'omega' must be a \"p/q\" or decimal string");
        }
        if (!t["h"].is_string()) bad("'h' must be an operator expression string");
        spec.h = t["h"].get<std::string>();
        doc.terms.push_back(std::move(spec));
    }
    return doc;
}

ScenarioDocument load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_json(buf.str());
}

std::string scenario_to_json(const ScenarioDocument& doc) {
    json j;
    j["space"] = json::array();
    for (const auto& f : doc.space) {
        if (f.kind == FactorKind::kQubit) {
            j["space"].push_back({{"kind", "qubit"}});
        } else {
            j["space"].push_back({{"kind", "boson"}, {"cutoff", f.dim}});
        }
    }
    j["base_frequency"] = doc.base_frequency;
    j["params"] = json::object();
    for (const auto& [name, value] : doc.params) j["params"][name] = value;
    j["terms"] = json::array();
    for (const auto& t : doc.terms) j["terms"].push_back({{"omega", t.omega}, {"h", t.h}});
    return canonical_json(j.dump());
}

FrequencyDecomposition build_decomposition(const ScenarioDocument& doc) {
    auto space = make_space(doc.space);
    std::map<std::string, Complex> params;
    for (const auto& [name, value] : doc.params) params[name] = Complex{value, 0.0};
    std::vector<FrequencyTerm> terms;
    for (const auto& t : doc.terms) {
        auto omega = Rational::parse(t.omega);
        auto h = parse_operator_expr(t.h, space, params);
        terms.push_back({std::move(h), omega, t.h});
    }
    return FrequencyDecomposition(space, doc.base_frequency, std::move(terms));
}

std::string scenario_hash(const ScenarioDocument& doc) {
    const auto text = scenario_to_json(doc);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace effham
