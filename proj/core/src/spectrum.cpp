#include "effham/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

namespace effham {

namespace {

// Residual sum of squares of the best fit c0 + c1 cos(wt) + c2 sin(wt).
double sinusoid_residual(std::span<const double> y, double dt, double w) {
    const auto n = static_cast<Eigen::Index>(y.size());
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd b(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) * dt;
        X(j, 0) = 1.0;
        X(j, 1) = std::cos(w * t);
        X(j, 2) = std::sin(w * t);
        b(j) = y[static_cast<std::size_t>(j)];
    }
    const Eigen::Vector3d c = X.colPivHouseholderQr().solve(b);
    return (X * c - b).squaredNorm();
}

} // namespace

double estimate_frequency(std::span<const double> samples, double dt) {
    const std::size_t n = samples.size();
    if (n < 8 || !(dt > 0.0)) return 0.0;
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(n);
    double spread = 0.0;
    for (double v : samples) spread = std::max(spread, std::abs(v - mean));
    if (spread < 1e-14) return 0.0;

    std::size_t padded = 1;
    while (padded < 8 * n) padded <<= 1;
    std::vector<double> x(padded, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) /
                                                 static_cast<double>(n - 1));
        x[j] = (samples[j] - mean) * hann;
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, x);

    // Skip the Hann main lobe around DC (half-width 2 bins of the unpadded length).
    const std::size_t first = std::max<std::size_t>(1, 2 * padded / n);
    const std::size_t half = padded / 2;
    std::size_t peak = first;
    for (std::size_t k = first; k < half; ++k) {
        if (std::abs(spectrum[k]) > std::abs(spectrum[peak])) peak = k;
    }
    double offset = 0.0;
    if (peak > first && peak + 1 < half) {
        const double a = std::log(std::abs(spectrum[peak - 1]) + 1e-300);
        const double b = std::log(std::abs(spectrum[peak]) + 1e-300);
        const double c = std::log(std::abs(spectrum[peak + 1]) + 1e-300);
        const double denom = a - 2.0 * b + c;
        if (denom < 0.0) offset = 0.5 * (a - c) / denom;
    }
    const double bin = 2.0 * std::numbers::pi / (static_cast<double>(padded) * dt);
    const double coarse = (static_cast<double>(peak) + offset) * bin;

    // Golden-section refinement within one unpadded bin of the coarse value.
    const double width = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
    double lo = std::max(coarse - width, 0.25 * coarse);
    double hi = coarse + width;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = sinusoid_residual(samples, dt, x1);
    double f2 = sinusoid_residual(samples, dt, x2);
    for (int iter = 0; iter < 80 && hi - lo > 1e-12 * coarse; ++iter) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = sinusoid_residual(samples, dt, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = sinusoid_residual(samples, dt, x2);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace effham
