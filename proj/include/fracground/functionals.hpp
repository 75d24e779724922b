#pragma once

#include <optional>
#include <string>

#include "fracground/grid.hpp"

namespace fracground {

// The six admissible nonlinearity shapes for D^sigma u + c u = f(u):
//   sp1:        f(s) = -|s|^{p-1}s + |s|^{q-1}s
//   sp2:        f(s) = +|s|^{p-1}s + |s|^{q-1}s
//   sp3:        f(s) = +|s|^{p-1}s - |s|^{q-1}s
//   sp4:        f(s) = -|s|^{p-1}s - |s|^{q-1}s
//   single:     f(s) = |s|^{p-1}s
//   integer_sp: f(s) = -s^p + s^q with integer p, q (sigma = 1), no modulus
enum class Variant { sp1, sp2, sp3, sp4, single_power, integer_sp };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

// Critical exponent 2/(1 - sigma) for sigma < 1, +infinity for sigma >= 1.
// Admissible power pairs satisfy q + 1 < critical_exponent(sigma).
double critical_exponent(double sigma);

struct ProblemSpec {
    double sigma = 1.0;
    double c = 1.0;
    double p = 2.0;
    double q = 3.0;
    Variant variant = Variant::sp1;

    ProblemSpec() = default;
    ProblemSpec(double sigma_, double c_, double p_, double q_, Variant variant_)
        : sigma(sigma_), c(c_), p(p_), q(q_), variant(variant_) {
        validate();
    }
    void validate() const;
};

// Signs (ep, eq) of the two power terms in f(s) = ep |s|^{p-1}s + eq |s|^{q-1}s
// (eq = 0 for the single-power shape).
std::pair<double, double> term_signs(Variant v);

double nonlinearity(const ProblemSpec& spec, double s);
double antiderivative(const ProblemSpec& spec, double s);
Field nonlinearity(const ProblemSpec& spec, const Field& u);
Field antiderivative(const ProblemSpec& spec, const Field& u);

// The four integrals every energy functional is assembled from.
struct Moments {
    double kinetic = 0.0;  // ||D^{sigma/2} u||_2^2
    double mass = 0.0;     // ||u||_2^2
    double pmom = 0.0;     // integral of |u|^{p+1} (signed u^{p+1} for integer_sp)
    double qmom = 0.0;     // integral of |u|^{q+1} (signed u^{q+1} for integer_sp)
};

Moments moments(const ProblemSpec& spec, const Field& u);
// Variant avoiding a forward transform when the coefficients are already known.
Moments moments(const ProblemSpec& spec, const Field& u, const Spectrum& u_hat);

double action_from(const ProblemSpec& spec, const Moments& m);
double nehari_from(const ProblemSpec& spec, const Moments& m);
double i_one_from(const ProblemSpec& spec, const Moments& m);
double pohozaev_p_from(const ProblemSpec& spec, const Moments& m);
double j_three_from(const ProblemSpec& spec, const Moments& m);
double pohozaev_residual_from(const ProblemSpec& spec, const Moments& m);

// S(u) = 1/2 ||D^{sigma/2} u||^2 + c/2 ||u||^2 - integral F(u)
double action(const ProblemSpec& spec, const Field& u);
// S'(u) = D^sigma u + c u - f(u)
Field action_gradient(const ProblemSpec& spec, const Field& u);
// K(u) = <S'(u), u>
double nehari(const ProblemSpec& spec, const Field& u);
// I(u) = S(u) - K(u)/(q+1); defined for the sp1 shape only
double i_one(const ProblemSpec& spec, const Field& u);
// P_c(u) = -c/2 ||u||^2 + ||u||_{p+1}^{p+1}/(p+1) - ||u||_{q+1}^{q+1}/(q+1); sp3 only
double pohozaev_p(const ProblemSpec& spec, const Field& u);
// J(u) = sigma/2 ||D^{sigma/2} u||^2; sp3 only
double j_three(const ProblemSpec& spec, const Field& u);
// (1-sigma)/2 ||D^{sigma/2} u||^2 + c/2 ||u||^2 - integral F(u); any variant
double pohozaev_residual(const ProblemSpec& spec, const Field& u);

// G_c(s) = c/2 s^2 - |s|^{p+1}/(p+1) + |s|^{q+1}/(q+1), the potential whose sign
// controls existence for the focusing-defocusing shape.
double g_c(const ProblemSpec& spec, double s);
double g_c(double c, double p, double q, double s);

struct ThresholdConstants {
    double alpha = 0.0;
    double beta = 0.0;
    double c0 = 0.0;
};

// Critical speed below which G_c attains negative values:
// c0 = 2 (q-p) (p-1)^beta (q+1)^beta / ((p+1)^alpha (q-1)^alpha),
// alpha = (q-1)/(q-p), beta = (p-1)/(q-p).
ThresholdConstants c_zero(double p, double q);

}  // namespace fracground
