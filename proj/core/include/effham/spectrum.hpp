// spectrum.hpp — Dominant oscillation frequency of a uniformly sampled signal

#pragma once

#include <span>

namespace effham {

// Angular frequency of the strongest non-DC component. Coarse estimate from
// the peak of a zero-padded, Hann-windowed FFT with quadratic (log-magnitude)
// interpolation, then refined by a golden-section search on the residual of
// a least-squares fit of c0 + c1 cos(w t) + c2 sin(w t). Returns 0 for a
// constant signal or fewer than 8 samples.
double estimate_frequency(std::span<const double> samples, double dt);

} // namespace effham
