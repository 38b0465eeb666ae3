#include "effham/scenarios.hpp"

#include <cmath>

#include "effham/effective.hpp"
#include "effham/errors.hpp"
#include "effham/expr_parser.hpp"

namespace effham {

ScenarioName parse_scenario_name(std::string_view name) {
    if (name == "two_atom" || name == "two_atom_one_photon") return ScenarioName::kTwoAtomOnePhoton;
    if (name == "rabi" || name == "rabi_three_photon") return ScenarioName::kRabiThreePhoton;
    throw InvalidArgument("unknown preset '" + std::string(name) + "' (expected two_atom or rabi)");
}

std::string to_string(ScenarioName name) {
    return name == ScenarioName::kTwoAtomOnePhoton ? "two_atom_one_photon" : "rabi_three_photon";
}

ScenarioParams ScenarioParams::defaults(ScenarioName name) {
    ScenarioParams p;
    p.name = name;
    if (name == ScenarioName::kTwoAtomOnePhoton) {
        p.cutoff = 6;
        p.n_initial = 1;
    } else {
        p.cutoff = 8;
        p.n_initial = 3;
    }
    return p;
}

std::vector<std::string> ScenarioParams::validate() const {
    std::vector<std::string> warnings;
    if (!(lambda_over_base > 0.0) || lambda_over_base > 0.2) {
        throw InvalidArgument("lambda must lie in (0, 0.2] base units, got " + std::to_string(lambda_over_base));
    }
    if (lambda_over_base > 0.1) {
        warnings.push_back("lambda = " + std::to_string(lambda_over_base) +
                           " is above 0.1 base units; perturbative expansion may be inaccurate");
    }
    if (n_initial < 0) throw InvalidArgument("n_initial must be non-negative");
    const int headroom = name == ScenarioName::kRabiThreePhoton ? 3 : 1;
    if (cutoff <= n_initial + headroom) {
        throw InvalidArgument("cutoff " + std::to_string(cutoff) + " must exceed n_initial + " +
                              std::to_string(headroom) + " = " + std::to_string(n_initial + headroom));
    }
    if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
    return warnings;
}

ScenarioDocument scenario_document(const ScenarioParams& p) {
    p.validate();
    ScenarioDocument doc;
    if (p.name == ScenarioName::kTwoAtomOnePhoton) {
        doc.space = {Factor::qubit(), Factor::qubit(), Factor::boson(p.cutoff)};
        doc.base_frequency = "omega_q";
        doc.params = {{"lambda", p.lambda_over_base}, {"theta", p.theta}};
        doc.terms = {
            {"1", "lambda*cos(theta)*adag(2)*(sm(0) + sm(1))"},
            {"2", "lambda*sin(theta)*adag(2)*(sz(0) + sz(1))"},
            {"3", "lambda*cos(theta)*adag(2)*(sp(0) + sp(1))"},
        };
    } else {
        doc.space = {Factor::qubit(), Factor::boson(p.cutoff)};
        doc.base_frequency = "omega_c";
        doc.params = {{"lambda", p.lambda_over_base}};
        doc.terms = {
            {"2", "lambda*a(1)*sp(0)"},
            {"4", "lambda*adag(1)*sp(0)"},
        };
    }

    const auto space = make_space(doc.space);
    std::map<std::string, Complex> params;
    for (const auto& [k, v] : doc.params) params[k] = v;
    std::erase_if(doc.terms, [&](const ScenarioTermSpec& t) {
        return parse_operator_expr(t.h, space, params).is_zero();
    });
    if (doc.terms.empty()) throw InvalidArgument("scenario has no nonzero terms for these parameters");
    return doc;
}

FrequencyDecomposition build_two_atom(const ScenarioParams& p) {
    if (p.name != ScenarioName::kTwoAtomOnePhoton) throw InvalidArgument("build_two_atom: wrong scenario");
    return build_decomposition(scenario_document(p));
}

FrequencyDecomposition build_rabi(const ScenarioParams& p) {
    if (p.name != ScenarioName::kRabiThreePhoton) throw InvalidArgument("build_rabi: wrong scenario");
    return build_decomposition(scenario_document(p));
}

FrequencyDecomposition build_scenario(const ScenarioParams& p) { return build_decomposition(scenario_document(p)); }

std::string initial_label(const ScenarioParams& p) {
    if (p.name == ScenarioName::kTwoAtomOnePhoton) return "gg," + std::to_string(p.n_initial);
    return "g," + std::to_string(p.n_initial);
}

std::string target_label(const ScenarioParams& p) {
    if (p.name == ScenarioName::kTwoAtomOnePhoton) {
        if (p.n_initial < 1) throw InvalidArgument("two-atom target needs n_initial >= 1");
        return "ee," + std::to_string(p.n_initial - 1);
    }
    if (p.n_initial < 3) throw InvalidArgument("three-photon target needs n_initial >= 3");
    return "e," + std::to_string(p.n_initial - 3);
}

double stark_compensation(const ScenarioParams& p) {
    if (p.name != ScenarioName::kRabiThreePhoton) throw InvalidArgument("stark_compensation: Rabi scenario only");
    if (p.n_initial < 3) throw InvalidArgument("stark_compensation: n_initial must be >= 3");
    const auto h2 = eff2(build_rabi(p));
    const Complex upper = matrix_element(h2, target_label(p), target_label(p));
    const Complex lower = matrix_element(h2, initial_label(p), initial_label(p));
    return (upper - lower).real() / 3.0;
}

StarkCompensation compensate_rabi(const ScenarioParams& p) {
    const double delta_value = stark_compensation(p);
    const Rational delta = Rational::approximate(delta_value);
    auto doc = scenario_document(p);
    doc.terms = {
        {(Rational(2) - delta).to_string(), "lambda*a(1)*sp(0)"},
        {(Rational(4) + delta).to_string(), "lambda*adag(1)*sp(0)"},
    };
    auto shifted = build_decomposition(doc);
    auto generator = Complex{delta.to_double(), 0.0} * boson_op(shifted.space_ptr(), 1, BosonOp::kN);
    return {delta, std::move(doc), std::move(shifted), std::move(generator)};
}

ScenarioDocument with_fock_headroom(ScenarioDocument doc, int extra) {
    if (extra < 0) throw InvalidArgument("fock headroom must be non-negative");
    for (auto& f : doc.space) {
        if (f.kind == FactorKind::kBoson) f.dim += extra;
    }
    return doc;
}

EffectiveHamiltonian derive_effective(const ScenarioDocument& doc, int order, DegeneracyPolicy policy,
                                      int fock_headroom) {
    const auto target = build_decomposition(doc);
    if (fock_headroom == 0) return effn(target, order, policy);
    const auto padded = build_decomposition(with_fock_headroom(doc, fock_headroom));
    return restrict_to(effn(padded, order, policy), target.space_ptr());
}

} // namespace effham
