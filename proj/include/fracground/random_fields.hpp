#pragma once

#include <cstdint>

#include "fracground/grid.hpp"

namespace fracground {

// Smooth random field with Gaussian-damped spectral content: real Fourier synthesis
// with normal coefficients on modes 1..k_cut, coefficient k damped by exp(-(k/k0)^2)
// with k0 = k_cut/3. Deterministic in the seed (hand-rolled Box-Muller on top of
// mt19937_64, so the stream does not depend on the standard library's distributions).
Field random_smooth_field(const GridSpec& grid, std::uint64_t seed, int k_cut = 0, double amplitude = 1.0);

// |random_smooth_field| + 0.05 * amplitude: strictly positive test fields.
Field random_positive_field(const GridSpec& grid, std::uint64_t seed, int k_cut = 0, double amplitude = 1.0);

}  // namespace fracground
