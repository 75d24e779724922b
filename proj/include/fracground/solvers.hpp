#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracground/functionals.hpp"
#include "fracground/grid.hpp"

namespace fracground {

enum class InitialProfile { gaussian, lorentzian, sech2, file };

std::string to_string(InitialProfile p);
InitialProfile initial_profile_from_string(const std::string& name);

struct SolverConfig {
    int max_iter = 20000;
    double grad_tol = 1e-8;  // relative Euler-Lagrange residual target
    double step = 1.0;       // requested step; clamped to the spectral stability bound
    int recenter_every = 10; // rearrangement cadence in iterations; 0 disables
    InitialProfile initial_profile = InitialProfile::lorentzian;
    double init_amplitude = 1.0;
    double init_width = 1.0;
    std::uint64_t seed = 0;
    std::string init_file;  // profile CSV, used when initial_profile == file

    void validate() const;
};

struct GroundStateReport {
    Field profile;
    ProblemSpec spec;
    double action = 0.0;
    double nehari_value = 0.0;
    double pohozaev = 0.0;     // scaling-identity residual of the profile
    double el_residual = 0.0;  // ||S'(phi)||_2 / ||phi||_2
    std::optional<double> multiplier;  // constrained path only
    std::optional<double> j3_value;    // constrained path only
    double d_estimate = 0.0;
    int iterations = 0;
    bool converged = false;
    int halvings = 0;  // rejected-step count across the run
};

// Optional per-run instrumentation for tests.
struct SolveTrace {
    std::vector<double> action_values;      // objective at accepted gradient steps
    std::vector<double> projection_checks;  // |K|/||u||_{H_c}^2 right after each projection
    int halvings = 0;
};

namespace detail {
// Smallest positive root of a + B t^{p-1} + G t^{q-1} (first sign change from +).
double nehari_root(double a, double B, double G, double p, double q);
}  // namespace detail

// Scale factor lambda > 0 with K(lambda * u) = 0.
double nehari_scaling(const ProblemSpec& spec, const Field& u);

// Builds the configured starting profile on the grid.
Field initial_guess(const GridSpec& grid, const SolverConfig& config);

// Circularly shifts the peak of |u| to the center node (ties: smallest index).
Field recenter(const Field& u);

// Projected gradient descent on the Nehari manifold {K = 0} with periodic
// rearrangement. Variants: sp1, sp2, single.
GroundStateReport minimize_nehari(const ProblemSpec& spec, const GridSpec& grid, const SolverConfig& config,
                                  SolveTrace* trace = nullptr);

// Ground state of the focusing-defocusing shape (sp3, sigma <= 1, c below
// threshold), phrased through the constrained problem for
// J(u) = sigma/2 ||D^{sigma/2}u||^2.  sigma = 1: projected descent of J over
// {P_c = 0, ||u||_2 = 1}; the reported profile is the dilated candidate
// phi(x) = v(mu x) that solves the Euler-Lagrange equation.  sigma < 1: the
// Euler-Lagrange equation is solved directly (focusing-only profile continued
// to the full nonlinearity by damped Newton steps), and the minimum of J over
// {P_c = 1} plus the multiplier mu are read off phi through the exact dilation
// laws of P_c and J.  Either way the report carries multiplier and j3_value.
GroundStateReport minimize_pohozaev(const ProblemSpec& spec, const GridSpec& grid, const SolverConfig& config,
                                    SolveTrace* trace = nullptr);

// Fixed-point iteration with power normalization for the single-power shape.
Field petviashvili(const ProblemSpec& spec, const GridSpec& grid, const SolverConfig& config,
                   int* iterations = nullptr);

}  // namespace fracground
