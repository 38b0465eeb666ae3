#include "effham/decomposition.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "effham/errors.hpp"

namespace effham {

FrequencyDecomposition::FrequencyDecomposition(SpacePtr space, std::string base_frequency_label,
                                               std::vector<FrequencyTerm> terms)
    : space_(std::move(space)), base_label_(std::move(base_frequency_label)), terms_(std::move(terms)) {
    if (!space_) throw InvalidArgument("FrequencyDecomposition: null space");
    if (terms_.empty()) throw InvalidArgument("FrequencyDecomposition: at least one term is required");
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (std::size_t m = 0; m < terms_.size(); ++m) {
        const auto& term = terms_[m];
        if (!(term.h.space() == *space_)) {
            throw SpaceMismatch("FrequencyDecomposition: term " + std::to_string(m) + " lives on another space");
        }
        if (term.omega.sign() <= 0) {
            throw InvalidArgument("FrequencyDecomposition: term " + std::to_string(m) +
                                  " has non-positive frequency " + term.omega.to_string());
        }
        if (term.h.is_zero()) {
            throw InvalidArgument("FrequencyDecomposition: term " + std::to_string(m) + " has a zero amplitude");
        }
        if (!seen.emplace(term.omega.num(), term.omega.den()).second) {
            throw InvalidArgument("FrequencyDecomposition: frequency " + term.omega.to_string() +
                                  " appears more than once; frequencies must be distinct");
        }
    }
}

Rational FrequencyDecomposition::max_frequency() const {
    Rational best = terms_.front().omega;
    for (const auto& t : terms_) {
        if (t.omega > best) best = t.omega;
    }
    return best;
}

double FrequencyDecomposition::period() const {
    Rational g = terms_.front().omega;
    for (const auto& t : terms_) g = rational_gcd(g, t.omega);
    return 2.0 * std::numbers::pi / g.to_double();
}

std::vector<SignedComponent> expand_signed(const FrequencyDecomposition& d) {
    std::vector<SignedComponent> out;
    out.reserve(2 * d.size());
    for (std::size_t m = 0; m < d.size(); ++m) {
        const auto& term = d.terms()[m];
        out.push_back({m, +1, term.omega, term.h});
        out.push_back({m, -1, -term.omega, dagger(term.h)});
    }
    return out;
}

Operator evaluate_at(const FrequencyDecomposition& d, double t, double base_freq) {
    if (!(base_freq > 0.0)) throw InvalidArgument("evaluate_at: base frequency must be positive");
    Operator total = Operator::zero(d.space_ptr());
    for (const auto& term : d.terms()) {
        const Complex phase = std::polar(1.0, term.omega.to_double() * base_freq * t);
        total += phase * term.h + std::conj(phase) * dagger(term.h);
    }
    return total;
}

DenseHamiltonian::DenseHamiltonian(const FrequencyDecomposition& d)
    : dim_(static_cast<Eigen::Index>(d.space().dim())) {
    for (const auto& c : expand_signed(d)) {
        omegas_.push_back(c.nu.to_double());
        amps_.push_back(c.amp.dense());
    }
}

Eigen::MatrixXcd DenseHamiltonian::at(double t) const {
    Eigen::MatrixXcd out;
    at(t, out);
    return out;
}

void DenseHamiltonian::at(double t, Eigen::MatrixXcd& out) const {
    out.setZero(dim_, dim_);
    // Components come in conjugate pairs; build h e^{iwt} and add its adjoint.
    for (std::size_t k = 0; k < amps_.size(); k += 2) {
        out.noalias() += std::polar(1.0, omegas_[k] * t) * amps_[k];
    }
    const Eigen::MatrixXcd half = out;
    out = half + half.adjoint();
}

} // namespace effham
