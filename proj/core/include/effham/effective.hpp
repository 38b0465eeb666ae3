// effective.hpp — Effective Hamiltonians by iterated time integration
//
// The order-n generator applies H_I(t) to n-1 nested integrals of H_I and
// keeps only non-oscillating products. For a sequence of signed components
// with frequencies nu_1..nu_n (nu_1 outermost) every nested integral
// contributes the upper-limit factor 1/(i S_k), where S_k = nu_k + ... + nu_n
// is the tail sum. A sequence survives when S_1 = 0, and then
//
//   coefficient = (-1)^(n-1) * prod_{k=2..n} 1/S_k.
//
// Sequences with S_1 = 0 but some S_k = 0 are secular at an inner level and
// cannot be absorbed; they are reported as degenerate.

#pragma once

#include <string_view>
#include <vector>

#include "effham/decomposition.hpp"

namespace effham {

struct ResonanceTuple {
    // Indices into expand_signed(d), outermost first.
    std::vector<std::size_t> components;
    std::vector<Rational> nu;
    // S_2..S_n. All nonzero unless the tuple is degenerate.
    std::vector<Rational> tail_sums;
    double coefficient{0.0};

    int order() const noexcept { return static_cast<int>(components.size()); }
};

struct ResonanceSet {
    std::vector<ResonanceTuple> kept;
    std::vector<ResonanceTuple> degenerate;
};

ResonanceSet enumerate_resonances(const FrequencyDecomposition& d, int order);

struct LedgerEntry {
    ResonanceTuple tuple;
    Operator contribution;
};

struct EffectiveHamiltonian {
    int order{0};
    Operator total;
    // Tuples whose operator product vanishes identically are not listed.
    std::vector<LedgerEntry> ledger;
    std::vector<ResonanceTuple> degeneracy_report;
};

enum class DegeneracyPolicy {
    kRaise,  // throw DegenerateResonance when any degenerate tuple exists
    kReport, // drop degenerate tuples from the total, list them in the report
};

// sum_m (1/w_m) [h_m, h_m^dagger]
EffectiveHamiltonian eff2(const FrequencyDecomposition& d);

// Term-family transcription of the RWA-reduced third-order generator,
// written independently of the generic tuple rule.
EffectiveHamiltonian eff3_explicit(const FrequencyDecomposition& d);

EffectiveHamiltonian effn(const FrequencyDecomposition& d, int order,
                          DegeneracyPolicy policy = DegeneracyPolicy::kRaise);

// Restricts total and ledger to a truncated space (see restrict_to). Used to
// derive on a space with extra Fock headroom so that virtual transitions
// through levels above the retained cutoff are not lost.
EffectiveHamiltonian restrict_to(const EffectiveHamiltonian& h, const SpacePtr& target);

Complex matrix_element(const EffectiveHamiltonian& h, std::string_view bra, std::string_view ket);

} // namespace effham
