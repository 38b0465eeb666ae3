#include "effham/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "effham/dyson.hpp"
#include "effham/errors.hpp"
#include "effham/expm.hpp"
#include "effham/spectrum.hpp"

namespace effham {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

StateVector::StateVector(SpacePtr space, Eigen::VectorXcd amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
    if (!space_) throw InvalidArgument("StateVector: null space");
    if (amps_.size() != static_cast<Eigen::Index>(space_->dim())) {
        throw SpaceMismatch("StateVector: amplitude count does not match space dimension");
    }
    if (std::abs(amps_.norm() - 1.0) > kNormTolerance) {
        throw InvalidArgument("StateVector: state must be normalised");
    }
}

StateVector StateVector::basis(const SpacePtr& space, std::size_t index) {
    if (index >= space->dim()) throw InvalidLabel("basis index out of range");
    Vec v = Vec::Zero(static_cast<Eigen::Index>(space->dim()));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(space, std::move(v));
}

StateVector StateVector::basis(const SpacePtr& space, std::string_view label) {
    return basis(space, space->parse_label(label));
}

std::vector<double> Trajectory::population(std::size_t index) const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(std::norm(s(static_cast<Eigen::Index>(index))));
    return out;
}

double Trajectory::max_leakage() const {
    double worst = 0.0;
    for (const auto& row : leakage) {
        for (double v : row) worst = std::max(worst, v);
    }
    return worst;
}

namespace {

// Flat indices of the top Fock level of every boson leg.
std::vector<std::vector<Eigen::Index>> edge_indices(const SpaceSpec& space) {
    std::vector<std::vector<Eigen::Index>> out;
    for (std::size_t leg = 0; leg < space.num_factors(); ++leg) {
        const auto& f = space.factor(leg);
        if (f.kind != FactorKind::kBoson) continue;
        std::vector<Eigen::Index> idx;
        for (std::size_t i = 0; i < space.dim(); ++i) {
            if (space.level(i, leg) == f.dim - 1) idx.push_back(static_cast<Eigen::Index>(i));
        }
        out.push_back(std::move(idx));
    }
    return out;
}

class Recorder {
public:
    Recorder(Trajectory& traj, double threshold)
        : traj_(traj), edges_(edge_indices(*traj.space)), threshold_(threshold) {}

    void record(double t, const Vec& psi) {
        traj_.times.push_back(t);
        traj_.states.push_back(psi);
        std::vector<double> occ;
        for (const auto& idx : edges_) {
            double p = 0.0;
            for (auto i : idx) p += std::norm(psi(i));
            occ.push_back(p);
            if (p > threshold_) {
                throw LeakageExceeded("boson cutoff-edge occupancy " + std::to_string(p) + " at t = " +
                                      std::to_string(t) + " exceeds " + std::to_string(threshold_) +
                                      "; increase the cutoff");
            }
        }
        traj_.leakage.push_back(std::move(occ));
        traj_.max_norm_drift = std::max(traj_.max_norm_drift, std::abs(psi.norm() - 1.0));
    }

private:
    Trajectory& traj_;
    std::vector<std::vector<Eigen::Index>> edges_;
    double threshold_;
};

class StepPropagator {
public:
    StepPropagator(const FrequencyDecomposition& d, StepRule rule, double dt) : H_(d), rule_(rule), dt_(dt) {}

    // Propagator over [t, t + dt].
    Mat operator()(double t) {
        const Complex minus_i{0.0, -1.0};
        if (rule_ == StepRule::kMidpoint) {
            H_.at(t + 0.5 * dt_, h1_);
            return expm(minus_i * dt_ * h1_);
        }
        constexpr double kGauss = 0.28867513459481288225; // sqrt(3)/6
        H_.at(t + (0.5 - kGauss) * dt_, h1_);
        H_.at(t + (0.5 + kGauss) * dt_, h2_);
        Mat omega = (minus_i * 0.5 * dt_) * (h1_ + h2_);
        // -(sqrt(3)/12) dt^2 [H2, H1]
        omega.noalias() -= (0.5 * kGauss * dt_ * dt_) * (h2_ * h1_);
        omega.noalias() += (0.5 * kGauss * dt_ * dt_) * (h1_ * h2_);
        return expm(omega);
    }

private:
    DenseHamiltonian H_;
    StepRule rule_;
    double dt_;
    Mat h1_, h2_;
};

} // namespace

Trajectory propagate_full(const FrequencyDecomposition& d, const StateVector& psi0,
                          const FullPropagationOptions& options) {
    if (!(psi0.space() == d.space())) throw SpaceMismatch("propagate_full: state and Hamiltonian spaces differ");
    if (!(options.dt > 0.0)) throw InvalidArgument("propagate_full: dt must be positive");
    if (options.t_final < 0.0) throw InvalidArgument("propagate_full: t_final must be non-negative");
    const double phase = options.dt * d.max_frequency().to_double();
    if (phase > kMaxPhasePerStep) {
        throw StepTooLarge("dt * max frequency = " + std::to_string(phase) + " exceeds " +
                           std::to_string(kMaxPhasePerStep));
    }

    std::size_t stride = 1;
    if (options.sample_interval > 0.0) {
        stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(options.sample_interval / options.dt)));
    }
    const double period = d.period();
    const bool fast = options.periodic_fast_path && options.t_final > 2.0 * period;

    double dt = options.dt;
    std::size_t strides_per_period = 0;
    if (fast) {
        strides_per_period =
            static_cast<std::size_t>(std::ceil(period / (options.dt * static_cast<double>(stride)) - 1e-9));
        dt = period / static_cast<double>(strides_per_period * stride);
    }
    const double sample_dt = dt * static_cast<double>(stride);
    const auto samples = static_cast<std::size_t>(std::floor(options.t_final / sample_dt + 1e-9));

    Trajectory traj;
    traj.space = d.space_ptr();
    traj.dt = dt;
    Recorder recorder(traj, options.leakage_threshold);
    StepPropagator step(d, options.rule, dt);

    const auto n = static_cast<Eigen::Index>(d.space().dim());
    Vec psi = psi0.amplitudes();
    recorder.record(0.0, psi);
    if (samples == 0) return traj;

    if (!fast) {
        std::size_t s = 0;
        for (std::size_t q = 1; q <= samples; ++q) {
            for (std::size_t k = 0; k < stride; ++k, ++s) psi = step(static_cast<double>(s) * dt) * psi;
            recorder.record(static_cast<double>(q) * sample_dt, psi);
        }
        return traj;
    }

    // Cumulative propagators at every sample offset of the first period.
    std::vector<Mat> offsets;
    offsets.reserve(strides_per_period + 1);
    Mat cumulative = Mat::Identity(n, n);
    offsets.push_back(cumulative);
    std::size_t s = 0;
    for (std::size_t j = 1; j <= strides_per_period; ++j) {
        for (std::size_t k = 0; k < stride; ++k, ++s) cumulative = step(static_cast<double>(s) * dt) * cumulative;
        offsets.push_back(cumulative);
    }
    const Mat& one_period = offsets.back();

    Vec start = psi;
    for (std::size_t q = 1; q <= samples; ++q) {
        const std::size_t j = q % strides_per_period;
        if (j == 0) {
            start = one_period * start;
            recorder.record(static_cast<double>(q) * sample_dt, start);
        } else {
            recorder.record(static_cast<double>(q) * sample_dt, offsets[j] * start);
        }
    }
    return traj;
}

Trajectory propagate_effective(const Operator& H, const StateVector& psi0, std::span<const double> times) {
    if (!(psi0.space() == H.space())) throw SpaceMismatch("propagate_effective: state and operator spaces differ");
    const double defect = hermitian_defect(H);
    if (defect > 1e-10) {
        throw NonHermitianGenerator("propagate_effective: hermitian defect " + std::to_string(defect));
    }
    for (std::size_t j = 1; j < times.size(); ++j) {
        if (!(times[j] > times[j - 1])) throw InvalidArgument("propagate_effective: time grid must increase");
    }

    Trajectory traj;
    traj.space = H.space_ptr();
    traj.dt = times.size() > 1 ? times[1] - times[0] : 0.0;
    Recorder recorder(traj, std::numeric_limits<double>::infinity());

    const Mat dense = H.dense();
    const Vec& psi0v = psi0.amplitudes();
    if (dense.rows() <= 512) {
        const Mat herm = 0.5 * (dense + dense.adjoint());
        Eigen::SelfAdjointEigenSolver<Mat> solver(herm);
        if (solver.info() != Eigen::Success) throw Error("propagate_effective: eigendecomposition failed");
        const Mat& V = solver.eigenvectors();
        const Eigen::VectorXd& E = solver.eigenvalues();
        const Vec coeffs = V.adjoint() * psi0v;
        for (double t : times) {
            Vec phased(coeffs.size());
            for (Eigen::Index k = 0; k < coeffs.size(); ++k) phased(k) = std::polar(1.0, -E(k) * t) * coeffs(k);
            recorder.record(t, V * phased);
        }
        return traj;
    }

    Vec psi = psi0v;
    double t_prev = 0.0;
    Mat step;
    double step_dt = -1.0;
    for (double t : times) {
        const double h = t - t_prev;
        if (h != 0.0) {
            if (std::abs(h - step_dt) > 1e-15 * std::max(1.0, std::abs(h))) {
                step = expm(Complex{0.0, -h} * dense);
                step_dt = h;
            }
            psi = step * psi;
        }
        recorder.record(t, psi);
        t_prev = t;
    }
    return traj;
}

Trajectory propagate_effective(const Operator& H, const StateVector& psi0, double t_final, double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("propagate_effective: dt must be positive");
    const auto samples = static_cast<std::size_t>(std::floor(t_final / dt + 1e-9));
    std::vector<double> times(samples + 1);
    for (std::size_t j = 0; j <= samples; ++j) times[j] = static_cast<double>(j) * dt;
    return propagate_effective(H, psi0, times);
}

Trajectory rotate_frame(const Trajectory& traj, const Operator& diagonal_generator) {
    const auto& m = diagonal_generator.matrix();
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(m.rows());
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        for (Operator::Matrix::InnerIterator it(m, r); it; ++it) {
            if (it.row() != it.col() || std::abs(it.value().imag()) > 1e-14) {
                throw InvalidArgument("rotate_frame: generator must be real diagonal");
            }
            diag(it.row()) = it.value().real();
        }
    }
    Trajectory out = traj;
    for (std::size_t s = 0; s < out.states.size(); ++s) {
        const double t = out.times[s];
        for (Eigen::Index k = 0; k < diag.size(); ++k) out.states[s](k) *= std::polar(1.0, diag(k) * t);
    }
    return out;
}

ComparisonReport compare(const Trajectory& full, const Trajectory& eff, std::span<const std::size_t> observables) {
    if (full.times.size() != eff.times.size()) throw InvalidArgument("compare: grid mismatch (sample counts differ)");
    for (std::size_t j = 0; j < full.times.size(); ++j) {
        if (std::abs(full.times[j] - eff.times[j]) > 1e-9 * std::max(1.0, std::abs(full.times[j]))) {
            throw InvalidArgument("compare: grid mismatch at sample " + std::to_string(j));
        }
    }
    if (full.space && eff.space && !(*full.space == *eff.space)) throw SpaceMismatch("compare: trajectories live on different spaces");

    ComparisonReport report;
    report.times = full.times;
    const double sample_dt = full.times.size() > 1 ? full.times[1] - full.times[0] : 0.0;
    for (auto index : observables) {
        ObservableComparison row;
        row.index = index;
        row.label = full.space ? full.space->format_label(index) : std::to_string(index);
        const auto pf = full.population(index);
        const auto pe = eff.population(index);
        for (std::size_t j = 0; j < pf.size(); ++j) {
            row.max_deviation = std::max(row.max_deviation, std::abs(pf[j] - pe[j]));
            row.max_population_full = std::max(row.max_population_full, pf[j]);
            row.max_population_effective = std::max(row.max_population_effective, pe[j]);
        }
        row.frequency_full = estimate_frequency(pf, sample_dt);
        row.frequency_effective = estimate_frequency(pe, sample_dt);
        report.observables.push_back(std::move(row));
    }
    report.fidelity.reserve(full.states.size());
    for (std::size_t j = 0; j < full.states.size(); ++j) {
        const double f = std::norm(full.states[j].dot(eff.states[j]));
        report.fidelity.push_back(f);
        report.min_fidelity = std::min(report.min_fidelity, f);
    }
    return report;
}

} // namespace effham
