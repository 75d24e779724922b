#include "fracground/random_fields.hpp"

#include <cmath>
#include <random>

#include "fracground/spectral.hpp"

namespace fracground {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

Field random_smooth_field(const GridSpec& grid, std::uint64_t seed, int k_cut, double amplitude) {
    grid.validate();
    if (k_cut <= 0) k_cut = std::max(4, grid.N / 16);
    k_cut = std::min(k_cut, grid.N / 2 - 1);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const double k0 = k_cut / 3.0;

    Spectrum c(grid);
    for (int k = 1; k <= k_cut; ++k) {
        const double damp = std::exp(-(k / k0) * (k / k0));
        const double re = standard_normal(rng) * damp;
        const double im = standard_normal(rng) * damp;
        c.coeff[static_cast<size_t>(k)] = std::complex<double>(re, im);
        c.coeff[static_cast<size_t>(grid.N - k)] = std::conj(c.coeff[static_cast<size_t>(k)]);
    }
    c.coeff[0] = standard_normal(rng) * 0.25;
    Field u = inverse(c);
    const double peak = lp_norm(u, 2.0);
    const double scale = peak > 0.0 ? amplitude * std::sqrt(2.0 * grid.L) / peak : amplitude;
    for (double& v : u.values) v *= scale;
    return u;
}

Field random_positive_field(const GridSpec& grid, std::uint64_t seed, int k_cut, double amplitude) {
    Field u = random_smooth_field(grid, seed, k_cut, amplitude);
    for (double& v : u.values) v = std::abs(v) + 0.05 * amplitude;
    return u;
}

}  // namespace fracground
