#include "effham/dyson.hpp"

#include <cmath>
#include <numbers>

#include "effham/effective.hpp"
#include "effham/errors.hpp"

namespace effham {

namespace {

void check_step(const FrequencyDecomposition& d, double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
    const double phase = dt * d.max_frequency().to_double();
    if (phase > kMaxPhasePerStep) {
        throw StepTooLarge("dt * max frequency = " + std::to_string(phase) + " exceeds " +
                           std::to_string(kMaxPhasePerStep));
    }
}

// One RK4 step of the hierarchy Y_k' = -i H(t) Y_{k-1}, Y_0 fixed.
// Works for matrices (full propagator) and single columns alike.
template <typename Block>
void rk4_step(const DenseHamiltonian& H, double t, double dt, std::vector<Block>& Y) {
    const std::size_t K = Y.size() - 1;
    const Complex minus_i{0.0, -1.0};
    const Eigen::MatrixXcd H0 = H.at(t);
    const Eigen::MatrixXcd Hm = H.at(t + 0.5 * dt);
    const Eigen::MatrixXcd H1 = H.at(t + dt);

    std::vector<Block> k1(K + 1), k2(K + 1), k3(K + 1), k4(K + 1), stage(K + 1);
    const auto derivative = [&](const Eigen::MatrixXcd& Hc, const std::vector<Block>& Yc, std::vector<Block>& out) {
        out[0] = Block::Zero(Yc[0].rows(), Yc[0].cols());
        for (std::size_t k = 1; k <= K; ++k) out[k].noalias() = minus_i * (Hc * Yc[k - 1]);
    };
    derivative(H0, Y, k1);
    for (std::size_t k = 0; k <= K; ++k) stage[k] = Y[k] + 0.5 * dt * k1[k];
    derivative(Hm, stage, k2);
    for (std::size_t k = 0; k <= K; ++k) stage[k] = Y[k] + 0.5 * dt * k2[k];
    derivative(Hm, stage, k3);
    for (std::size_t k = 0; k <= K; ++k) stage[k] = Y[k] + dt * k3[k];
    derivative(H1, stage, k4);
    for (std::size_t k = 1; k <= K; ++k) Y[k] += (dt / 6.0) * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
}

} // namespace

Eigen::MatrixXcd SeriesPropagator::resummed(std::size_t sample) const {
    const auto& p = partials.at(sample);
    Eigen::MatrixXcd total = p[0];
    for (std::size_t k = 1; k < p.size(); ++k) total += p[k];
    return total;
}

SeriesPropagator dyson_series(const FrequencyDecomposition& d, int order, double t_final, double dt,
                              std::size_t sample_stride) {
    if (order < 1) throw InvalidArgument("dyson_series: order must be >= 1");
    check_step(d, dt);
    if (!(t_final >= dt)) throw InvalidArgument("dyson_series: t_final must be >= dt");
    if (sample_stride == 0) sample_stride = 1;

    const DenseHamiltonian H(d);
    const auto n = H.dim();
    const auto steps = static_cast<std::size_t>(std::llround(t_final / dt));

    std::vector<Eigen::MatrixXcd> Y(static_cast<std::size_t>(order) + 1, Eigen::MatrixXcd::Zero(n, n));
    Y[0] = Eigen::MatrixXcd::Identity(n, n);

    SeriesPropagator out;
    out.order = order;
    out.dt = dt;
    out.times.push_back(0.0);
    out.partials.push_back(Y);
    for (std::size_t s = 1; s <= steps; ++s) {
        rk4_step(H, static_cast<double>(s - 1) * dt, dt, Y);
        if (s % sample_stride == 0 || s == steps) {
            out.times.push_back(static_cast<double>(s) * dt);
            out.partials.push_back(Y);
        }
    }
    return out;
}

std::vector<SecularRate> secular_rates(const FrequencyDecomposition& d, int order, const SecularWindow& window,
                                       std::size_t initial) {
    if (order < 2) throw InvalidArgument("secular_rate_check: order must be >= 2");
    check_step(d, window.dt);
    const auto dim = d.space().dim();
    if (initial >= dim) throw InvalidLabel("secular_rate_check: state index out of range");
    if (!(window.t1 > window.t0) || window.t0 < 0.0) throw WindowTooShort("secular_rate_check: empty window");

    const double fit_start = window.t0 + 0.1 * (window.t1 - window.t0);
    const double span = window.t1 - fit_start;

    const auto resonances = enumerate_resonances(d, order);
    double slowest = 0.0;
    for (const auto& t : resonances.kept) {
        for (const auto& s : t.tail_sums) {
            const double w = std::abs(s.to_double());
            if (slowest == 0.0 || w < slowest) slowest = w;
        }
    }
    if (slowest > 0.0 && span < 4.0 * 2.0 * std::numbers::pi / slowest) {
        throw WindowTooShort("secular_rate_check: fitted span " + std::to_string(span) +
                             " is shorter than four periods of the slowest tail oscillation (" +
                             std::to_string(2.0 * std::numbers::pi / slowest) + ")");
    }

    const DenseHamiltonian H(d);
    std::vector<Eigen::VectorXcd> Y(static_cast<std::size_t>(order) + 1, Eigen::VectorXcd::Zero(H.dim()));
    Y[0](static_cast<Eigen::Index>(initial)) = 1.0;

    const auto steps = static_cast<std::size_t>(std::llround(window.t1 / window.dt));
    // Ordinary least squares sums, time measured from the fit start.
    double sw = 0.0, st = 0.0, stt = 0.0;
    Eigen::VectorXcd sy = Eigen::VectorXcd::Zero(H.dim());
    Eigen::VectorXcd sty = Eigen::VectorXcd::Zero(H.dim());
    std::size_t points = 0;
    const auto accumulate = [&](double t) {
        if (t < fit_start - 1e-12) return;
        const auto& y = Y[static_cast<std::size_t>(order)];
        t -= fit_start;
        sw += 1.0;
        st += t;
        stt += t * t;
        sy += y;
        sty += t * y;
        ++points;
    };
    accumulate(0.0);
    for (std::size_t s = 1; s <= steps; ++s) {
        rk4_step(H, static_cast<double>(s - 1) * window.dt, window.dt, Y);
        accumulate(static_cast<double>(s) * window.dt);
    }
    if (points < 200) {
        throw WindowTooShort("secular_rate_check: only " + std::to_string(points) + " grid points in the fit");
    }
    const double denom = sw * stt - st * st;
    std::vector<SecularRate> out(dim);
    for (std::size_t f = 0; f < dim; ++f) {
        const auto fi = static_cast<Eigen::Index>(f);
        auto& r = out[f];
        r.slope = (sw * sty(fi) - st * sy(fi)) / denom;
        r.intercept = (sy(fi) - r.slope * st) / sw - r.slope * fit_start;
        r.magnitude = std::abs(r.slope);
        r.points = points;
    }
    return out;
}

SecularRate secular_rate_check(const FrequencyDecomposition& d, int order, const SecularWindow& window,
                               std::size_t initial, std::size_t final_state) {
    if (final_state >= d.space().dim()) throw InvalidLabel("secular_rate_check: state index out of range");
    return secular_rates(d, order, window, initial)[final_state];
}

} // namespace effham
