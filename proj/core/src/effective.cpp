#include "effham/effective.hpp"

#include <array>

#include "effham/errors.hpp"

namespace effham {

namespace {

// Exact prod S_k when it fits in 64 bits; falls back to double otherwise.
double tuple_coefficient(const std::vector<Rational>& tail_sums) {
    const int n = static_cast<int>(tail_sums.size()) + 1;
    const double sign = (n - 1) % 2 == 0 ? 1.0 : -1.0;
    try {
        Rational product(1);
        for (const auto& s : tail_sums) product = product * s;
        return sign / product.to_double();
    } catch (const InvalidArgument&) {
        double product = 1.0;
        for (const auto& s : tail_sums) product *= s.to_double();
        return sign / product;
    }
}

std::string describe(const ResonanceTuple& t) {
    std::string s = "(";
    for (std::size_t j = 0; j < t.nu.size(); ++j) {
        if (j) s += ", ";
        s += t.nu[j].to_string();
    }
    return s + ")";
}

} // namespace

ResonanceSet enumerate_resonances(const FrequencyDecomposition& d, int order) {
    if (order < 2) throw InvalidArgument("enumerate_resonances: order must be >= 2");
    const auto components = expand_signed(d);
    const std::size_t base = components.size();
    const auto n = static_cast<std::size_t>(order);

    ResonanceSet out;
    std::vector<std::size_t> digits(n, 0);
    while (true) {
        Rational total;
        for (auto idx : digits) total += components[idx].nu;
        if (total.is_zero()) {
            ResonanceTuple t;
            t.components = digits;
            for (auto idx : digits) t.nu.push_back(components[idx].nu);
            t.tail_sums.resize(n - 1);
            Rational tail;
            bool degenerate = false;
            for (std::size_t k = n; k-- > 1;) {
                tail += t.nu[k];
                t.tail_sums[k - 1] = tail;
                degenerate = degenerate || tail.is_zero();
            }
            if (degenerate) {
                out.degenerate.push_back(std::move(t));
            } else {
                t.coefficient = tuple_coefficient(t.tail_sums);
                out.kept.push_back(std::move(t));
            }
        }
        // Odometer, last position fastest: lexicographic tuple order.
        std::size_t pos = n;
        while (pos > 0) {
            --pos;
            if (++digits[pos] < base) break;
            digits[pos] = 0;
            if (pos == 0) return out;
        }
    }
}

EffectiveHamiltonian eff2(const FrequencyDecomposition& d) {
    EffectiveHamiltonian out{2, Operator::zero(d.space_ptr()), {}, {}};
    for (std::size_t m = 0; m < d.size(); ++m) {
        const auto& h = d.terms()[m].h;
        const auto hd = dagger(h);
        const double inv_omega = 1.0 / d.terms()[m].omega.to_double();
        out.total += inv_omega * commutator(h, hd);

        const Rational w = d.terms()[m].omega;
        ResonanceTuple plus{{2 * m, 2 * m + 1}, {w, -w}, {-w}, inv_omega};
        ResonanceTuple minus{{2 * m + 1, 2 * m}, {-w, w}, {w}, -inv_omega};
        auto c_plus = inv_omega * (h * hd);
        auto c_minus = -inv_omega * (hd * h);
        if (!c_plus.is_zero()) out.ledger.push_back({std::move(plus), std::move(c_plus)});
        if (!c_minus.is_zero()) out.ledger.push_back({std::move(minus), std::move(c_minus)});
    }
    return out;
}

EffectiveHamiltonian eff3_explicit(const FrequencyDecomposition& d) {
    EffectiveHamiltonian out{3, Operator::zero(d.space_ptr()), {}, {}};
    const std::size_t M = d.size();
    std::vector<Operator> h, hd;
    for (const auto& t : d.terms()) {
        h.push_back(t.h);
        hd.push_back(dagger(t.h));
    }

    // Each family: dagger flags for (l, m, n) and whether the denominator is
    // w_n (w_n - w_m) or w_n (w_n + w_m).
    struct Family {
        std::array<bool, 3> dag;
        bool plus_denominator;
    };
    static constexpr std::array<Family, 6> kFamilies = {{
        {{false, true, false}, false},
        {{true, false, true}, false},
        {{false, false, true}, false},
        {{true, true, false}, false},
        {{true, false, false}, true},
        {{false, true, true}, true},
    }};

    for (std::size_t l = 0; l < M; ++l) {
        for (std::size_t m = 0; m < M; ++m) {
            for (std::size_t n = 0; n < M; ++n) {
                const std::array<std::size_t, 3> idx{l, m, n};
                for (const auto& fam : kFamilies) {
                    Rational exponent;
                    std::array<Rational, 3> nu;
                    for (int j = 0; j < 3; ++j) {
                        const auto& w = d.terms()[idx[j]].omega;
                        nu[j] = fam.dag[j] ? -w : w;
                        exponent += nu[j];
                    }
                    if (!exponent.is_zero()) continue;

                    const auto& wm = d.terms()[m].omega;
                    const auto& wn = d.terms()[n].omega;
                    const Rational denom = wn * (fam.plus_denominator ? wn + wm : wn - wm);
                    if (denom.is_zero()) {
                        throw DegenerateResonance("eff3_explicit: vanishing denominator for term triple (" +
                                                  std::to_string(l) + ", " + std::to_string(m) + ", " +
                                                  std::to_string(n) + ")");
                    }
                    const double coefficient = 1.0 / denom.to_double();
                    const auto& A = fam.dag[0] ? hd[l] : h[l];
                    const auto& B = fam.dag[1] ? hd[m] : h[m];
                    const auto& C = fam.dag[2] ? hd[n] : h[n];
                    auto contribution = coefficient * (A * B * C);
                    if (contribution.is_zero()) continue;

                    ResonanceTuple t;
                    for (int j = 0; j < 3; ++j) {
                        t.components.push_back(2 * idx[j] + (fam.dag[j] ? 1 : 0));
                        t.nu.push_back(nu[j]);
                    }
                    t.tail_sums = {nu[1] + nu[2], nu[2]};
                    t.coefficient = coefficient;
                    out.total += contribution;
                    out.ledger.push_back({std::move(t), std::move(contribution)});
                }
            }
        }
    }
    return out;
}

EffectiveHamiltonian effn(const FrequencyDecomposition& d, int order, DegeneracyPolicy policy) {
    auto resonances = enumerate_resonances(d, order);
    if (!resonances.degenerate.empty() && policy == DegeneracyPolicy::kRaise) {
        throw DegenerateResonance("effn: order " + std::to_string(order) + " has " +
                                  std::to_string(resonances.degenerate.size()) +
                                  " resonant sequences with a vanishing tail sum, first " +
                                  describe(resonances.degenerate.front()));
    }
    const auto components = expand_signed(d);
    EffectiveHamiltonian out{order, Operator::zero(d.space_ptr()), {}, std::move(resonances.degenerate)};
    // Kept tuples arrive in lexicographic order; summing in that order keeps
    // the result bit-stable.
    for (auto& t : resonances.kept) {
        Operator product = components[t.components.front()].amp;
        for (std::size_t j = 1; j < t.components.size() && !product.is_zero(); ++j) {
            product = product * components[t.components[j]].amp;
        }
        if (product.is_zero()) continue;
        auto contribution = Complex{t.coefficient, 0.0} * product;
        out.total += contribution;
        out.ledger.push_back({std::move(t), std::move(contribution)});
    }
    return out;
}

EffectiveHamiltonian restrict_to(const EffectiveHamiltonian& h, const SpacePtr& target) {
    EffectiveHamiltonian out{h.order, restrict_to(h.total, target), {}, h.degeneracy_report};
    for (const auto& e : h.ledger) {
        auto c = restrict_to(e.contribution, target);
        if (!c.is_zero()) out.ledger.push_back({e.tuple, std::move(c)});
    }
    return out;
}

Complex matrix_element(const EffectiveHamiltonian& h, std::string_view bra, std::string_view ket) {
    const auto& space = h.total.space();
    return h.total.coeff(space.parse_label(bra), space.parse_label(ket));
}

} // namespace effham
