// cli.cpp — Subcommand wiring and exit-code mapping

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "effham/dyson.hpp"
#include "effham/dynamics.hpp"
#include "effham/effective.hpp"
#include "effham/errors.hpp"
#include "effham/output.hpp"
#include "effham/scenario_io.hpp"
#include "effham/scenarios.hpp"
#include "effham/version.hpp"

namespace effham::cli {

namespace fs = std::filesystem;

namespace {

struct ScenarioOptions {
    std::string preset;
    std::string scenario_file;
    std::string lambda;
    std::optional<double> theta;
    std::optional<int> cutoff;
    std::optional<int> n_initial;
};

// One fully resolved input: either a preset with its parameters, or a file.
struct Resolved {
    std::string source;
    std::optional<ScenarioParams> params;
    ScenarioDocument doc;
};

std::vector<double> parse_lambda_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("--lambda: cannot parse '" + item + "'");
        }
        if (used != item.size()) throw InvalidArgument("--lambda: cannot parse '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw InvalidArgument("--lambda: empty list");
    return out;
}

std::vector<int> parse_orders(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("--orders: cannot parse '" + item + "'");
        }
        if (used != item.size() || v < 2) throw InvalidArgument("--orders: entries must be integers >= 2");
        if (std::find(out.begin(), out.end(), v) != out.end()) throw InvalidArgument("--orders: repeated order");
        out.push_back(v);
    }
    if (out.empty()) throw InvalidArgument("--orders: empty list");
    return out;
}

void add_scenario_options(CLI::App* app, ScenarioOptions& o) {
    auto* preset = app->add_option("--preset", o.preset, "Built-in scenario: two_atom or rabi");
    auto* file = app->add_option("--scenario", o.scenario_file, "Scenario JSON file");
    preset->excludes(file);
    app->add_option("--lambda", o.lambda, "Coupling in base-frequency units (preset only)");
    app->add_option("--theta", o.theta, "Mixing angle in radians (two_atom preset)");
    app->add_option("--cutoff", o.cutoff, "Boson dimension (preset only)");
    app->add_option("--n-initial", o.n_initial, "Initial photon number (preset only)");
}

std::vector<Resolved> resolve(const ScenarioOptions& o, std::ostream& err) {
    if (o.preset.empty() == o.scenario_file.empty()) {
        throw InvalidArgument("exactly one of --preset or --scenario is required");
    }
    std::vector<Resolved> out;
    if (!o.scenario_file.empty()) {
        if (!o.lambda.empty() || o.theta || o.cutoff || o.n_initial) {
            throw InvalidArgument("--lambda/--theta/--cutoff/--n-initial apply to presets only");
        }
        out.push_back({o.scenario_file, std::nullopt, load_scenario_file(o.scenario_file)});
        return out;
    }
    const auto name = parse_scenario_name(o.preset);
    auto base = ScenarioParams::defaults(name);
    if (o.theta) base.theta = *o.theta;
    if (o.cutoff) base.cutoff = *o.cutoff;
    if (o.n_initial) base.n_initial = *o.n_initial;
    const auto lambdas = o.lambda.empty() ? std::vector<double>{base.lambda_over_base} : parse_lambda_list(o.lambda);
    for (double l : lambdas) {
        auto p = base;
        p.lambda_over_base = l;
        for (const auto& w : p.validate()) err << "warning: " << w << "\n";
        out.push_back({to_string(name), p, scenario_document(p)});
    }
    return out;
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write " + path.string());
    f << text;
    if (!f) throw InvalidArgument("failed writing " + path.string());
}

// ISO-8601 UTC. SOURCE_DATE_EPOCH pins the clock for reproducible manifests.
std::string timestamp() {
    std::time_t now = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        const long long v = std::strtoll(epoch, &end, 10);
        if (end != epoch && *end == '\0') now = static_cast<std::time_t>(v);
    }
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string version_string() { return std::string(kVersion) + " (" + kGitDescribe + ")"; }

std::vector<std::string> basis_labels(const SpaceSpec& space) {
    std::vector<std::string> labels;
    labels.reserve(space.dim());
    for (std::size_t i = 0; i < space.dim(); ++i) labels.push_back(space.format_label(i));
    return labels;
}

bool touches_top_level(const SpaceSpec& space, std::size_t index) {
    for (std::size_t leg = 0; leg < space.num_factors(); ++leg) {
        const auto& f = space.factor(leg);
        if (f.kind == FactorKind::kBoson && space.level(index, leg) == f.dim - 1) return true;
    }
    return false;
}

std::string format_complex(Complex z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%+.6e%+.6ei", z.real() == 0.0 ? 0.0 : z.real(), z.imag() == 0.0 ? 0.0 : z.imag());
    return buf;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// --- derive -------------------------------------------------------------

struct DeriveOptions {
    ScenarioOptions scenario;
    int order{3};
    int fock_headroom{0};
    std::string out{"-"};
    std::string degeneracy{"raise"};
};

int cmd_derive(const DeriveOptions& o, std::ostream& out, std::ostream& err) {
    const auto inputs = resolve(o.scenario, err);
    if (inputs.size() != 1) throw InvalidArgument("derive takes a single --lambda value");
    const auto& in = inputs.front();
    if (o.order < 1) throw InvalidArgument("--order must be >= 1");
    DegeneracyPolicy policy{};
    if (o.degeneracy == "raise") {
        policy = DegeneracyPolicy::kRaise;
    } else if (o.degeneracy == "report") {
        policy = DegeneracyPolicy::kReport;
    } else {
        throw InvalidArgument("--degeneracy must be raise or report");
    }
    const auto d = build_decomposition(in.doc);
    const auto H = derive_effective(in.doc, o.order, policy, o.fock_headroom);
    const auto text = derive_json(H, d, in.doc, {scenario_hash(in.doc), in.source, version_string()});
    if (o.out == "-") {
        out << text;
    } else {
        write_file(o.out, text);
    }
    return kOk;
}

// --- simulate -----------------------------------------------------------

struct SimulateOptions {
    ScenarioOptions scenario;
    std::string mode{"both"};
    double t_final{0.0};
    double dt{0.01};
    double sample_interval{0.0};
    std::string initial;
    bool compensate_stark{false};
    std::string out_dir{"."};
    std::string orders{"2,3"};
    std::string rule{"magnus4"};
    bool no_fast_path{false};
    double leakage_threshold{1e-3};
};

struct RunResult {
    int code{kOk};
    std::string message;
};

int exit_code_for(const std::exception& e);

std::string simulate_one(const SimulateOptions& o, const Resolved& in, const fs::path& dir,
                         const std::vector<std::string>& command_line) {
    const auto started = timestamp();
    const bool want_full = o.mode == "full" || o.mode == "both";
    const bool want_eff = o.mode == "effective" || o.mode == "both";
    if (!(o.t_final > 0.0)) throw InvalidArgument("--t-final must be positive");
    const auto orders = parse_orders(o.orders);

    std::string initial = o.initial;
    if (initial.empty()) {
        if (!in.params) throw InvalidLabel("--initial is required with --scenario");
        initial = initial_label(*in.params);
    }

    ScenarioDocument used = in.doc;
    auto d = build_decomposition(in.doc);
    std::optional<StarkCompensation> comp;
    std::map<std::string, std::string> params;
    if (o.compensate_stark) {
        if (!in.params || in.params->name != ScenarioName::kRabiThreePhoton) {
            throw InvalidArgument("--compensate-stark requires --preset rabi");
        }
        comp = compensate_rabi(*in.params);
        used = comp->document;
        params["stark_delta"] = comp->delta.to_string();
    }
    const auto& sim_d = comp ? comp->shifted : d;
    const auto psi0 = StateVector::basis(sim_d.space_ptr(), initial);

    params["mode"] = o.mode;
    params["t_final"] = format_double(o.t_final);
    params["dt"] = format_double(o.dt);
    params["sample_interval"] = format_double(o.sample_interval);
    params["initial"] = initial;
    params["orders"] = o.orders;
    params["rule"] = o.rule;
    params["periodic_fast_path"] = o.no_fast_path ? "false" : "true";
    params["leakage_threshold"] = format_double(o.leakage_threshold);
    params["compensate_stark"] = o.compensate_stark ? "true" : "false";
    for (const auto& [k, v] : used.params) params["param." + k] = format_double(v);

    std::vector<std::string> outputs;
    std::optional<Trajectory> full;
    std::optional<Trajectory> eff;

    if (want_full) {
        FullPropagationOptions fo;
        fo.t_final = o.t_final;
        fo.dt = o.dt;
        fo.sample_interval = o.sample_interval;
        fo.rule = o.rule == "midpoint" ? StepRule::kMidpoint : StepRule::kMagnus4;
        fo.periodic_fast_path = !o.no_fast_path;
        fo.leakage_threshold = o.leakage_threshold;
        full = propagate_full(sim_d, psi0, fo);
        params["dt_used"] = format_double(full->dt);
        write_file(dir / "trajectory_full.csv", trajectory_csv(*full));
        outputs.push_back("trajectory_full.csv");
    }
    if (want_eff) {
        auto H = Operator::zero(d.space_ptr());
        for (int k : orders) H += effn(d, k).total;
        if (comp) H += comp->frame_generator;
        const auto psi_eff = StateVector::basis(d.space_ptr(), initial);
        if (full) {
            eff = propagate_effective(H, psi_eff, full->times);
        } else {
            const double step = o.sample_interval > 0.0 ? o.sample_interval : o.t_final / 1000.0;
            eff = propagate_effective(H, psi_eff, o.t_final, step);
        }
        if (comp) eff = rotate_frame(*eff, comp->frame_generator);
        write_file(dir / "trajectory_effective.csv", trajectory_csv(*eff));
        outputs.push_back("trajectory_effective.csv");
    }
    if (full && eff) {
        // Observables: the initial state, the preset's resonant partner, and
        // any state that picks up more than 1% population in either run.
        std::vector<std::size_t> obs{psi0.space().parse_label(initial)};
        if (in.params) obs.push_back(psi0.space().parse_label(target_label(*in.params)));
        for (std::size_t i = 0; i < psi0.space().dim(); ++i) {
            double peak = 0.0;
            for (std::size_t s = 0; s < full->states.size(); ++s) {
                peak = std::max({peak, std::norm(full->states[s](static_cast<Eigen::Index>(i))),
                                 std::norm(eff->states[s](static_cast<Eigen::Index>(i)))});
            }
            if (peak > 0.01) obs.push_back(i);
        }
        std::sort(obs.begin(), obs.end());
        obs.erase(std::unique(obs.begin(), obs.end()), obs.end());
        const auto report = compare(*full, *eff, obs);
        write_file(dir / "comparison.json", comparison_json(report));
        outputs.push_back("comparison.json");
    }

    RunManifest m;
    m.command_line = command_line;
    m.scenario_hash = scenario_hash(used);
    m.parameters = params;
    m.tool_version = version_string();
    m.started = started;
    m.finished = timestamp();
    m.outputs = outputs;
    m.space = used.space;
    m.labels = basis_labels(sim_d.space());
    m.scenario = used;
    write_file(dir / "manifest.json", manifest_json(m));
    return (dir / "manifest.json").string();
}

unsigned scan_threads(std::size_t runs) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("EFFHAM_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) n = static_cast<unsigned>(v);
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, runs));
}

int cmd_simulate(const SimulateOptions& o, const std::vector<std::string>& command_line, std::ostream& out,
                 std::ostream& err) {
    if (o.mode != "full" && o.mode != "effective" && o.mode != "both") {
        throw InvalidArgument("--mode must be full, effective or both");
    }
    if (o.rule != "magnus4" && o.rule != "midpoint") throw InvalidArgument("--rule must be magnus4 or midpoint");
    const auto inputs = resolve(o.scenario, err);
    const fs::path root(o.out_dir);
    if (inputs.size() == 1) {
        out << simulate_one(o, inputs.front(), root, command_line) << "\n";
        return kOk;
    }

    // Parameter scan: independent runs, one directory each.
    std::vector<RunResult> results(inputs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (std::size_t i = next++; i < inputs.size(); i = next++) {
            try {
                results[i].message = simulate_one(o, inputs[i], root / ("run_" + std::to_string(i)), command_line);
            } catch (const std::exception& e) {
                results[i].code = exit_code_for(e);
                results[i].message = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned n = scan_threads(inputs.size());
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    int code = kOk;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].code == kOk) {
            out << results[i].message << "\n";
        } else {
            err << "run_" << i << ": " << results[i].message << "\n";
            if (code == kOk) code = results[i].code;
        }
    }
    return code;
}

// --- oracle -------------------------------------------------------------

struct OracleOptions {
    ScenarioOptions scenario;
    int order{3};
    std::string window{"0:40"};
    double dt{0.002};
    std::string initial;
    int fock_headroom{0};
};

SecularWindow parse_window(const std::string& text, double dt) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidArgument("--window must be t0:t1");
    try {
        std::size_t u0 = 0, u1 = 0;
        const auto a = text.substr(0, colon);
        const auto b = text.substr(colon + 1);
        SecularWindow w{std::stod(a, &u0), std::stod(b, &u1), dt};
        if (u0 != a.size() || u1 != b.size()) throw InvalidArgument("--window must be t0:t1");
        return w;
    } catch (const std::logic_error&) {
        throw InvalidArgument("--window must be t0:t1");
    }
}

int cmd_oracle(const OracleOptions& o, std::ostream& out, std::ostream& err) {
    const auto inputs = resolve(o.scenario, err);
    if (inputs.size() != 1) throw InvalidArgument("oracle takes a single --lambda value");
    const auto& in = inputs.front();
    const auto window = parse_window(o.window, o.dt);
    const auto d = build_decomposition(in.doc);
    const auto H = derive_effective(in.doc, o.order, DegeneracyPolicy::kRaise, o.fock_headroom);
    const auto& space = d.space();
    const auto dense = H.total.dense();

    std::vector<std::size_t> columns;
    if (!o.initial.empty()) {
        columns.push_back(space.parse_label(o.initial));
    } else {
        for (std::size_t i = 0; i < space.dim(); ++i) {
            if (!touches_top_level(space, i)) columns.push_back(i);
        }
    }

    double max_pred = 0.0;
    for (auto c : columns) {
        for (std::size_t r = 0; r < space.dim(); ++r) {
            if (!touches_top_level(space, r)) {
                max_pred = std::max(max_pred, std::abs(dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
            }
        }
    }
    const double zero_cut = 1e-12 * std::max(1.0, max_pred);

    bool ok = true;
    std::size_t rows = 0;
    double worst_zero = 0.0;
    std::string worst_zero_label;
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %-28s %-28s %-12s %s\n", "transition", "predicted", "measured",
                  "rel_error", "status");
    out << line;
    for (auto c : columns) {
        const auto rates = secular_rates(d, o.order, window, c);
        for (std::size_t r = 0; r < space.dim(); ++r) {
            if (touches_top_level(space, r)) continue;
            const Complex pred = dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            // The order-n partial grows as -i H_eff t.
            const Complex measured = Complex{0.0, 1.0} * rates[r].slope;
            if (std::abs(pred) <= zero_cut) {
                if (std::abs(measured) > worst_zero) {
                    worst_zero = std::abs(measured);
                    worst_zero_label = space.format_label(c) + " -> " + space.format_label(r);
                }
                continue;
            }
            const double rel = std::abs(measured - pred) / std::abs(pred);
            const bool good = rel <= 0.05;
            ok = ok && good;
            ++rows;
            const auto transition = space.format_label(c) + " -> " + space.format_label(r);
            std::snprintf(line, sizeof line, "%-20s %-28s %-28s %-12.4e %s\n", transition.c_str(),
                          format_complex(pred).c_str(), format_complex(measured).c_str(), rel, good ? "ok" : "MISMATCH");
            out << line;
        }
    }
    // Couplings the generator predicts to vanish must measure small against
    // the largest predicted one. From third order on, lower-order secular
    // terms times the constant part of the first-order partial also grow
    // linearly, so the check is informational there.
    const double zero_limit = max_pred > 0.0 ? 0.05 * max_pred : 1e-9;
    const bool checked = o.order == 2;
    const bool zeros_ok = !checked || worst_zero <= zero_limit;
    ok = ok && zeros_ok;
    std::snprintf(line, sizeof line, "zero-predicted couplings: max measured %.4e (%s), limit %.4e %s\n", worst_zero,
                  worst_zero_label.empty() ? "none" : worst_zero_label.c_str(), zero_limit,
                  !checked ? "not checked at this order" : (zeros_ok ? "ok" : "MISMATCH"));
    out << line;
    out << rows << " resonant rows, " << (ok ? "all within 5%" : "mismatch") << "\n";
    return ok ? kOk : kOracleMismatch;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const DegenerateResonance*>(&e)) return kDegenerate;
    if (dynamic_cast<const LeakageExceeded*>(&e)) return kLeakage;
    if (dynamic_cast<const StepTooLarge*>(&e)) return kStepGuard;
    if (dynamic_cast<const InvalidLabel*>(&e)) return kLabelError;
    if (dynamic_cast<const WindowTooShort*>(&e)) return kWindowTooShort;
    return kInputError;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Effective Hamiltonians of periodically driven systems", "effham"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_string());

    DeriveOptions derive;
    auto* sub_derive = app.add_subcommand("derive", "Write the order-n effective Hamiltonian as JSON");
    add_scenario_options(sub_derive, derive.scenario);
    sub_derive->add_option("--order", derive.order, "Perturbative order")->capture_default_str();
    sub_derive->add_option("--out", derive.out, "Output path, - for stdout")->capture_default_str();
    sub_derive->add_option("--fock-headroom", derive.fock_headroom,
                           "Extra boson levels used for virtual transitions")
        ->capture_default_str();
    sub_derive->add_option("--degeneracy", derive.degeneracy, "raise or report")->capture_default_str();

    SimulateOptions sim;
    auto* sub_sim = app.add_subcommand("simulate", "Propagate the full and/or effective dynamics");
    add_scenario_options(sub_sim, sim.scenario);
    sub_sim->add_option("--mode", sim.mode, "full, effective or both")->capture_default_str();
    sub_sim->add_option("--t-final", sim.t_final, "Final time, units of 1/base frequency")->required();
    sub_sim->add_option("--dt", sim.dt, "Full propagation step")->capture_default_str();
    sub_sim->add_option("--sample-interval", sim.sample_interval, "Recording interval, 0 = every step")
        ->capture_default_str();
    sub_sim->add_option("--initial", sim.initial, "Initial basis label, e.g. g,3");
    sub_sim->add_flag("--compensate-stark", sim.compensate_stark, "Shift w_c to cancel second-order detuning");
    sub_sim->add_option("--out-dir", sim.out_dir, "Output directory")->capture_default_str();
    sub_sim->add_option("--orders", sim.orders, "Effective orders summed, comma separated")->capture_default_str();
    sub_sim->add_option("--rule", sim.rule, "magnus4 or midpoint")->capture_default_str();
    sub_sim->add_flag("--no-fast-path", sim.no_fast_path, "Disable one-period propagator reuse");
    sub_sim->add_option("--leakage-threshold", sim.leakage_threshold, "Top Fock level population limit")
        ->capture_default_str();

    OracleOptions oracle;
    auto* sub_oracle = app.add_subcommand("oracle", "Check effective couplings against Dyson secular growth");
    add_scenario_options(sub_oracle, oracle.scenario);
    sub_oracle->add_option("--order", oracle.order, "Perturbative order")->capture_default_str();
    sub_oracle->add_option("--window", oracle.window, "Fit window t0:t1")->capture_default_str();
    sub_oracle->add_option("--dt", oracle.dt, "Series integration step")->capture_default_str();
    sub_oracle->add_option("--initial", oracle.initial, "Restrict to transitions out of this state");
    sub_oracle->add_option("--fock-headroom", oracle.fock_headroom,
                           "Extra boson levels used for virtual transitions")
        ->capture_default_str();

    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << version_string() << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        if (sub_derive->parsed()) return cmd_derive(derive, out, err);
        if (sub_sim->parsed()) return cmd_simulate(sim, args, out, err);
        return cmd_oracle(oracle, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

} // namespace effham::cli
