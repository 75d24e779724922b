#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracground/solvers.hpp"

namespace fracground {

enum class VerdictStatus { passed, failed, indeterminate };
std::string to_string(VerdictStatus s);

// One named inequality/equality check with the numbers that back it.
struct Verdict {
    std::string name;
    VerdictStatus status = VerdictStatus::indeterminate;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    std::string note;
};

// Outcome of the signed-solution classification for integer powers (sigma = 1):
// which of +/- branches the equation D u + c u + u^p - u^q = 0 admits, with the
// computed candidates and their action levels.
struct ClassificationReport {
    int p = 0;
    int q = 0;
    double c = 0.0;
    std::string case_label;  // odd_odd | odd_even | even_odd | even_even
    std::optional<GroundStateReport> positive_solution;
    std::optional<GroundStateReport> negative_solution;
    double d_estimate = 0.0;                // best known action level among candidates
    double d1_estimate = 0.0;               // positive-branch minimization level
    std::optional<double> a_estimate;       // action of the positive candidate as a signed solution
    std::vector<Verdict> verdicts;
};

// Solves the sign-resolved problems that the parity of (p, q) dictates and assembles
// the classification: positive branch always; negative branch through the variant
// whose ground state maps onto a negative solution (or a nonexistence audit).
ClassificationReport classify(int p, int q, double c, const GridSpec& grid, const SolverConfig& config);

struct Sp4AuditReport {
    int trials = 0;
    double coercivity_constant = 0.0;    // min(1, c)
    double min_ratio = 0.0;              // min over trials of K(u) / ||u||_{H_c}^2
    bool coercivity_ok = false;
    int collapse_runs = 0;
    double worst_final_mass_ratio = 0.0;  // max over runs of final/initial L2 norm
    bool collapse_ok = false;
    bool passed = false;
};

// Evidence that the defocusing-defocusing shape has no nontrivial states: K dominates
// the squared norm on random fields, and damped residual flow collapses every start.
Sp4AuditReport sp4_triviality_audit(const ProblemSpec& spec, const GridSpec& grid, int trials,
                                    std::uint64_t seed = 1234);

struct PositivityCheckReport {
    double lambda1 = 0.0;
    double l2_error = 0.0;   // ||recon - phi||_2 / ||phi||_2
    double max_error = 0.0;  // max|recon - phi| / max|phi|
    double min_value = 0.0;  // min of the reconstruction
    bool strictly_positive = false;
    bool passed = false;
};

// Rewrites the equation as phi = (D^sigma + c + lambda1)^{-1} [(lambda1 + h(phi)) phi]
// with f(s) = h(s) s and lambda1 = -min h(phi) + 1, making the right-hand side the
// resolvent of a nonnegative function; checks the identity reproduces phi within tol
// and that the reconstruction is strictly positive.
PositivityCheckReport positivity_representation_check(const Field& phi, const ProblemSpec& spec, double tol);

struct LevelAuditReport {
    int trials = 0;
    double min_margin = 0.0;          // min over projected trials of S(w) - S(phi)
    double perturbation_margin = 0.0; // S(projected perturbed phi) - S(phi)
    double i_consistency = 0.0;       // |S(phi) - I(phi)| (sp1 only, else 0)
    double action_value = 0.0;
    bool passed = false;
};

// Checks that the reported action is a plausible manifold minimum: S(phi) > 0, random
// Nehari-projected fields do not go below it, a perturbed-and-reprojected phi goes up,
// the sp1 identity S = I holds on {K = 0}, and fields with K < 0 keep I above S(phi).
LevelAuditReport ground_state_level_audit(const GroundStateReport& report, int trials,
                                          std::uint64_t seed = 99);

}  // namespace fracground
