// scenarios.hpp — Built-in decompositions: two atoms excited by one photon,
// and three-photon resonance in the far-detuned Rabi model.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "effham/decomposition.hpp"
#include "effham/effective.hpp"
#include "effham/scenario_io.hpp"

namespace effham {

enum class ScenarioName { kTwoAtomOnePhoton, kRabiThreePhoton };

ScenarioName parse_scenario_name(std::string_view name);
std::string to_string(ScenarioName name);

struct ScenarioParams {
    ScenarioName name{ScenarioName::kRabiThreePhoton};
    // Coupling in units of the base frequency (w_q or w_c).
    double lambda_over_base{0.05};
    // Mixing angle of the two-atom model, radians.
    double theta{0.7853981633974483};
    int cutoff{8};
    int n_initial{3};

    static ScenarioParams defaults(ScenarioName name);

    // Throws InvalidArgument on a guard violation; returns warnings.
    std::vector<std::string> validate() const;
};

// Zero-amplitude terms (theta = 0 or pi/2) are left out of the document.
ScenarioDocument scenario_document(const ScenarioParams& p);

FrequencyDecomposition build_two_atom(const ScenarioParams& p);
FrequencyDecomposition build_rabi(const ScenarioParams& p);
FrequencyDecomposition build_scenario(const ScenarioParams& p);

// Basis labels of the initial state and of its resonant partner.
std::string initial_label(const ScenarioParams& p);
std::string target_label(const ScenarioParams& p);

// Per-photon shift of w_c that aligns the second-order dressed energies of
// |g,n> and |e,n-3>:  ( <e,n-3|H2|e,n-3> - <g,n|H2|g,n> ) / 3.
double stark_compensation(const ScenarioParams& p);

struct StarkCompensation {
    Rational delta;
    // Rabi decomposition with w_c -> w_c + delta at fixed atomic frequency:
    // frequencies 2 - delta and 4 + delta.
    ScenarioDocument document;
    FrequencyDecomposition shifted;
    // D = delta * n. exp(-i D t) H_shifted(t) exp(i D t) + D equals the
    // unshifted H_I(t) + D, so effective dynamics of the shifted run are
    // those of H_eff + D seen through the frame exp(i D t).
    Operator frame_generator;
};

StarkCompensation compensate_rabi(const ScenarioParams& p);

// Every boson cutoff of the document raised by `extra` levels.
ScenarioDocument with_fock_headroom(ScenarioDocument doc, int extra);

// Order-n generator computed on the document's space enlarged by
// `fock_headroom` levels per boson, then restricted to the original cutoffs.
// With headroom >= (order - 1) times the largest ladder degree of any
// amplitude, entries touching the top retained level are those of the
// untruncated model.
EffectiveHamiltonian derive_effective(const ScenarioDocument& doc, int order, DegeneracyPolicy policy,
                                      int fock_headroom);

} // namespace effham
