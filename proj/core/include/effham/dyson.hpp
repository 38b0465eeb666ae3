// dyson.hpp — Truncated time-ordered series of the evolution operator
//
// The partials U_k(t) obey dU_k/dt = -i H_I(t) U_{k-1}(t) with U_0 = 1 and
// U_k(0) = 0, which is the nested-integral series written as a hierarchy
// of ODEs. Integrated with classical fixed-step RK4.

#pragma once

#include <vector>

#include "effham/decomposition.hpp"

namespace effham {

// dt * (largest frequency) above this is rejected as too coarse.
inline constexpr double kMaxPhasePerStep = 0.05;

struct SeriesPropagator {
    int order{0};
    double dt{0.0};
    std::vector<double> times;
    // partials[sample][k], k = 0..order
    std::vector<std::vector<Eigen::MatrixXcd>> partials;

    Eigen::MatrixXcd resummed(std::size_t sample) const;
};

// Samples every `sample_stride` steps, always including t = 0 and the last step.
SeriesPropagator dyson_series(const FrequencyDecomposition& d, int order, double t_final, double dt,
                              std::size_t sample_stride = 1);

struct SecularRate {
    // Least-squares slope of <final|U_n(t)|initial>; for a resonant pair
    // this is -i times the effective coupling.
    Complex slope;
    double magnitude{0.0};
    Complex intercept;
    std::size_t points{0};
};

struct SecularWindow {
    double t0{0.0};
    double t1{40.0};
    double dt{0.002};
};

// Fits the linear growth of the order-n partial over the window after
// discarding its first 10%. Requires at least 200 fitted points and a fitted
// span of at least four periods of the slowest tail-sum oscillation among
// the resonant tuples of that order.
SecularRate secular_rate_check(const FrequencyDecomposition& d, int order, const SecularWindow& window,
                               std::size_t initial, std::size_t final_state);

// Same fit for every final state at once, indexed by basis index.
std::vector<SecularRate> secular_rates(const FrequencyDecomposition& d, int order, const SecularWindow& window,
                                       std::size_t initial);

} // namespace effham
