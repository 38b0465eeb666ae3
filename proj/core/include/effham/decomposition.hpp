// decomposition.hpp — Frequency-decomposed interaction Hamiltonians
//
//   H_I(t) = sum_m [ h_m exp(i w_m t) + h_m^dagger exp(-i w_m t) ]
//
// Frequencies are exact positive rationals in units of a declared base
// frequency, pairwise distinct. Amplitudes carry energy in the same units
// (hbar = 1), so time is measured in units of 1/base_frequency.

#pragma once

#include <string>
#include <vector>

#include "effham/hilbert.hpp"
#include "effham/rational.hpp"

namespace effham {

struct FrequencyTerm {
    Operator h;
    Rational omega;
    // Source expression when the term came from a scenario file.
    std::string expr;
};

class FrequencyDecomposition {
public:
    FrequencyDecomposition(SpacePtr space, std::string base_frequency_label, std::vector<FrequencyTerm> terms);

    const SpaceSpec& space() const noexcept { return *space_; }
    const SpacePtr& space_ptr() const noexcept { return space_; }
    const std::string& base_frequency_label() const noexcept { return base_label_; }
    const std::vector<FrequencyTerm>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }

    Rational max_frequency() const;
    // Smallest common period 2*pi/g of all exponentials, g = gcd of frequencies.
    double period() const;

private:
    SpacePtr space_;
    std::string base_label_;
    std::vector<FrequencyTerm> terms_;
};

struct SignedComponent {
    std::size_t term_index{0};
    int sign{1};
    Rational nu;
    Operator amp;
};

// Ordered (term 0 +, term 0 -, term 1 +, ...); component 2m+1 is the
// conjugate partner of component 2m.
std::vector<SignedComponent> expand_signed(const FrequencyDecomposition& d);

Operator evaluate_at(const FrequencyDecomposition& d, double t, double base_freq = 1.0);

// Dense H_I(t) evaluation over precomputed signed components; used by the
// time steppers where the same decomposition is sampled many times.
class DenseHamiltonian {
public:
    explicit DenseHamiltonian(const FrequencyDecomposition& d);

    Eigen::MatrixXcd at(double t) const;
    void at(double t, Eigen::MatrixXcd& out) const;
    Eigen::Index dim() const noexcept { return dim_; }

private:
    Eigen::Index dim_;
    std::vector<double> omegas_;
    std::vector<Eigen::MatrixXcd> amps_;
};

} // namespace effham
