#pragma once

#include <memory>
#include <vector>

#include "fracground/grid.hpp"

namespace fracground {

// Forward/backward DFT between a real field and its complex coefficients.
// inverse() divides by N, so inverse(forward(u)) == u up to roundoff.
Spectrum forward(const Field& u);
Field inverse(const Spectrum& c);

// Shared immutable table of |xi_k|^sigma over the DFT bins of a grid (cached per
// (N, L, sigma)); bin 0 carries 0, the Nyquist bin carries (pi*(N/2)/L)^sigma.
std::shared_ptr<const std::vector<double>> symbol_table(const GridSpec& g, double sigma);

// D^sigma u: multiply coefficients by |xi|^sigma, transform back. sigma in (0, 2].
Field apply_symbol(const Field& u, double sigma);
// Same operator acting on coefficients in place.
void apply_symbol_inplace(Spectrum& c, double sigma);

// (D^sigma + nu)^{-1} u for nu > 0, sigma in (0, 2].
Field resolvent(const Field& u, double sigma, double nu);
void resolvent_inplace(Spectrum& c, double sigma, double nu);

// Grid sampling of the Green's function of (D^sigma + nu)^{-1}, i.e. the periodic
// convolution kernel: apply the resolvent symbol to a unit Dirac mass h^{-1} delta
// placed at x = 0 (node N/2). sigma in (0, 2) strictly.
Field kernel(double sigma, double nu, const GridSpec& grid);

// h * sum(u): the trapezoidal integral over the periodic cell.
double quadrature(const Field& u);

// (h * sum |u|^r)^(1/r), r >= 1.
double lp_norm(const Field& u, double r);
double l2_norm(const Field& u);

// ||D^{sigma/2} u||_2^2 via the coefficient sum (h/N) * sum |xi|^sigma |c|^2.
double kinetic_sq(const Field& u, double sigma);
double kinetic_sq(const Spectrum& c, double sigma);

// sqrt(||D^{sigma/2} u||_2^2 + c ||u||_2^2), c > 0.
double hsc_norm(const Field& u, double sigma, double c);

// Spectral-side L2 norm sqrt((h/N) * sum |c_k|^2); equals l2_norm of the field.
double spectral_l2_norm(const Spectrum& c);

// u(x / alpha) for alpha > 0: evaluates the trigonometric interpolant of u at the
// off-grid points x_m / alpha (chirp-z transform). Same grid on output.
Field dilate(const Field& u, double alpha);

// Circular shift by k nodes: out[(m + k) mod N] = u[m].
Field circular_shift(const Field& u, long k);

}  // namespace fracground
