// dynamics.hpp — Time propagation of H_I(t) and of static effective Hamiltonians

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "effham/decomposition.hpp"

namespace effham {

class StateVector {
public:
    StateVector(SpacePtr space, Eigen::VectorXcd amplitudes);

    static StateVector basis(const SpacePtr& space, std::size_t index);
    static StateVector basis(const SpacePtr& space, std::string_view label);

    const SpaceSpec& space() const noexcept { return *space_; }
    const SpacePtr& space_ptr() const noexcept { return space_; }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
    double norm() const { return amps_.norm(); }

private:
    SpacePtr space_;
    Eigen::VectorXcd amps_;
};

struct Trajectory {
    SpacePtr space;
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> states;
    // leakage[sample][boson] = occupancy of that boson's top Fock level.
    std::vector<std::vector<double>> leakage;
    double max_norm_drift{0.0};
    // Step actually used (may be snapped below the requested step).
    double dt{0.0};

    std::vector<double> population(std::size_t index) const;
    double max_leakage() const;
};

enum class StepRule {
    kMidpoint, // exp(-i H(t + dt/2) dt), second order
    kMagnus4,  // two-point Gauss fourth-order Magnus exponential
};

struct FullPropagationOptions {
    double t_final{0.0};
    double dt{0.01};
    // Spacing between recorded samples; rounded to a whole number of steps.
    // Zero records every step.
    double sample_interval{0.0};
    StepRule rule{StepRule::kMagnus4};
    // When the run spans several periods of H_I, propagate one period and
    // reuse its propagator. The step is snapped so a period holds a whole
    // number of sample strides.
    bool periodic_fast_path{true};
    double leakage_threshold{1e-3};
};

inline constexpr double kNormTolerance = 1e-9;

Trajectory propagate_full(const FrequencyDecomposition& d, const StateVector& psi0,
                          const FullPropagationOptions& options);

// exp(-i H t) psi0 on the given time grid; eigendecomposition up to
// dimension 512, repeated one-step exponentials above that.
Trajectory propagate_effective(const Operator& H, const StateVector& psi0, std::span<const double> times);
Trajectory propagate_effective(const Operator& H, const StateVector& psi0, double t_final, double dt);

// Maps a trajectory computed in a frame rotated by a diagonal generator D
// back to the original frame: psi -> exp(i D t) psi.
Trajectory rotate_frame(const Trajectory& traj, const Operator& diagonal_generator);

struct ObservableComparison {
    std::string label;
    std::size_t index{0};
    double max_deviation{0.0};
    double max_population_full{0.0};
    double max_population_effective{0.0};
    double frequency_full{0.0};
    double frequency_effective{0.0};
};

struct ComparisonReport {
    std::vector<ObservableComparison> observables;
    std::vector<double> times;
    // |<psi_full(t)|psi_eff(t)>|^2
    std::vector<double> fidelity;
    double min_fidelity{1.0};
};

ComparisonReport compare(const Trajectory& full, const Trajectory& eff, std::span<const std::size_t> observables);

} // namespace effham
