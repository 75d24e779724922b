#include "fracground/functionals.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "fracground/kernels.hpp"
#include "fracground/spectral.hpp"

namespace fracground {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::sp1: return "sp1";
        case Variant::sp2: return "sp2";
        case Variant::sp3: return "sp3";
        case Variant::sp4: return "sp4";
        case Variant::single_power: return "single";
        case Variant::integer_sp: return "integer_sp";
    }
    throw DomainError("to_string: unknown variant");
}

Variant variant_from_string(const std::string& name) {
    if (name == "sp1") return Variant::sp1;
    if (name == "sp2") return Variant::sp2;
    if (name == "sp3") return Variant::sp3;
    if (name == "sp4") return Variant::sp4;
    if (name == "single") return Variant::single_power;
    if (name == "integer_sp") return Variant::integer_sp;
    throw DomainError("variant_from_string: unknown variant '" + name + "'");
}

double critical_exponent(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || sigma >= 2.0)
        throw DomainError("critical_exponent: sigma must lie in (0, 2)");
    if (sigma >= 1.0) return std::numeric_limits<double>::infinity();
    return 2.0 / (1.0 - sigma);
}

void ProblemSpec::validate() const {
    if (!(sigma > 0.0) || !(sigma < 2.0) || !std::isfinite(sigma))
        throw DomainError("ProblemSpec: sigma must lie in (0, 2)");
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("ProblemSpec: c must be positive");
    if (!std::isfinite(p) || !std::isfinite(q)) throw DomainError("ProblemSpec: p, q must be finite");
    if (!(p > 1.0) || !(q > p)) throw DomainError("ProblemSpec: powers must satisfy 1 < p < q");
    if (sigma < 1.0 && !(q + 1.0 < critical_exponent(sigma)))
        throw DomainError("ProblemSpec: q + 1 must stay below the critical exponent 2/(1 - sigma)");
    if (variant == Variant::sp3 && sigma > 1.0)
        throw DomainError("ProblemSpec: the focusing-defocusing variant requires sigma <= 1");
    if (variant == Variant::integer_sp) {
        if (sigma != 1.0) throw DomainError("ProblemSpec: integer_sp requires sigma = 1");
        if (p != std::floor(p) || q != std::floor(q) || p < 2.0)
            throw DomainError("ProblemSpec: integer_sp requires integer powers with p >= 2");
    }
}

std::pair<double, double> term_signs(Variant v) {
    switch (v) {
        case Variant::sp1: return {-1.0, 1.0};
        case Variant::sp2: return {1.0, 1.0};
        case Variant::sp3: return {1.0, -1.0};
        case Variant::sp4: return {-1.0, -1.0};
        case Variant::single_power: return {1.0, 0.0};
        case Variant::integer_sp: return {-1.0, 1.0};
    }
    throw DomainError("term_signs: unknown variant");
}

namespace {

double signed_pow_one(double s, double p) {
    const double m = std::pow(std::abs(s), p);
    return s < 0.0 ? -m : m;
}

double int_pow_one(double s, long long k) {
    double r = 1.0;
    for (long long j = 0; j < k; ++j) r *= s;
    return r;
}

}  // namespace

double nonlinearity(const ProblemSpec& spec, double s) {
    const auto [ep, eq] = term_signs(spec.variant);
    if (spec.variant == Variant::integer_sp)
        return ep * int_pow_one(s, std::llround(spec.p)) + eq * int_pow_one(s, std::llround(spec.q));
    return ep * signed_pow_one(s, spec.p) + eq * signed_pow_one(s, spec.q);
}

double antiderivative(const ProblemSpec& spec, double s) {
    const auto [ep, eq] = term_signs(spec.variant);
    if (spec.variant == Variant::integer_sp)
        return ep * int_pow_one(s, std::llround(spec.p) + 1) / (spec.p + 1.0) +
               eq * int_pow_one(s, std::llround(spec.q) + 1) / (spec.q + 1.0);
    return ep * std::pow(std::abs(s), spec.p + 1.0) / (spec.p + 1.0) +
           eq * std::pow(std::abs(s), spec.q + 1.0) / (spec.q + 1.0);
}

Field nonlinearity(const ProblemSpec& spec, const Field& u) {
    const auto [ep, eq] = term_signs(spec.variant);
    const size_t n = u.values.size();
    Field out(u.grid);
    std::vector<double> tq(n);
    if (spec.variant == Variant::integer_sp) {
        kernels::int_pow(u.data(), out.data(), n, std::llround(spec.p));
        kernels::int_pow(u.data(), tq.data(), n, std::llround(spec.q));
    } else if (spec.variant == Variant::single_power) {
        kernels::signed_pow(u.data(), out.data(), n, spec.p);
        return out;
    } else {
        kernels::signed_pow(u.data(), out.data(), n, spec.p);
        kernels::signed_pow(u.data(), tq.data(), n, spec.q);
    }
    kernels::lincomb(ep, out.data(), eq, tq.data(), out.data(), n);
    return out;
}

Field antiderivative(const ProblemSpec& spec, const Field& u) {
    const auto [ep, eq] = term_signs(spec.variant);
    const size_t n = u.values.size();
    Field out(u.grid);
    std::vector<double> tq(n);
    if (spec.variant == Variant::integer_sp) {
        kernels::int_pow(u.data(), out.data(), n, std::llround(spec.p) + 1);
        kernels::int_pow(u.data(), tq.data(), n, std::llround(spec.q) + 1);
    } else if (spec.variant == Variant::single_power) {
        kernels::abs_pow(u.data(), out.data(), n, spec.p + 1.0);
        kernels::scale(out.data(), n, ep / (spec.p + 1.0));
        return out;
    } else {
        kernels::abs_pow(u.data(), out.data(), n, spec.p + 1.0);
        kernels::abs_pow(u.data(), tq.data(), n, spec.q + 1.0);
    }
    kernels::lincomb(ep / (spec.p + 1.0), out.data(), eq / (spec.q + 1.0), tq.data(), out.data(), n);
    return out;
}

Moments moments(const ProblemSpec& spec, const Field& u, const Spectrum& u_hat) {
    require_same_grid(u.grid, u_hat.grid, "moments");
    const size_t n = u.values.size();
    const double h = u.grid.h();
    Moments m;
    m.kinetic = kinetic_sq(u_hat, spec.sigma);
    m.mass = h * kernels::sum_sq(u.data(), n);
    if (spec.variant == Variant::integer_sp) {
        m.pmom = h * kernels::sum_int_pow(u.data(), n, std::llround(spec.p) + 1);
        m.qmom = h * kernels::sum_int_pow(u.data(), n, std::llround(spec.q) + 1);
    } else {
        m.pmom = h * kernels::sum_abs_pow(u.data(), n, spec.p + 1.0);
        m.qmom = spec.variant == Variant::single_power
                     ? 0.0
                     : h * kernels::sum_abs_pow(u.data(), n, spec.q + 1.0);
    }
    return m;
}

Moments moments(const ProblemSpec& spec, const Field& u) { return moments(spec, u, forward(u)); }

double action_from(const ProblemSpec& spec, const Moments& m) {
    const auto [ep, eq] = term_signs(spec.variant);
    const double f_int = ep * m.pmom / (spec.p + 1.0) + eq * m.qmom / (spec.q + 1.0);
    return 0.5 * m.kinetic + 0.5 * spec.c * m.mass - f_int;
}

double nehari_from(const ProblemSpec& spec, const Moments& m) {
    const auto [ep, eq] = term_signs(spec.variant);
    return m.kinetic + spec.c * m.mass - (ep * m.pmom + eq * m.qmom);
}

double i_one_from(const ProblemSpec& spec, const Moments& m) {
    if (spec.variant != Variant::sp1)
        throw UnsupportedVariantError("i_one: defined for the sp1 shape only");
    const double a = m.kinetic + spec.c * m.mass;
    return (0.5 - 1.0 / (spec.q + 1.0)) * a + (1.0 / (spec.p + 1.0) - 1.0 / (spec.q + 1.0)) * m.pmom;
}

double pohozaev_p_from(const ProblemSpec& spec, const Moments& m) {
    if (spec.variant != Variant::sp3)
        throw UnsupportedVariantError("pohozaev_p: defined for the sp3 shape only");
    return -0.5 * spec.c * m.mass + m.pmom / (spec.p + 1.0) - m.qmom / (spec.q + 1.0);
}

double j_three_from(const ProblemSpec& spec, const Moments& m) {
    if (spec.variant != Variant::sp3)
        throw UnsupportedVariantError("j_three: defined for the sp3 shape only");
    return 0.5 * spec.sigma * m.kinetic;
}

double pohozaev_residual_from(const ProblemSpec& spec, const Moments& m) {
    const auto [ep, eq] = term_signs(spec.variant);
    const double f_int = ep * m.pmom / (spec.p + 1.0) + eq * m.qmom / (spec.q + 1.0);
    return 0.5 * (1.0 - spec.sigma) * m.kinetic + 0.5 * spec.c * m.mass - f_int;
}

double action(const ProblemSpec& spec, const Field& u) { return action_from(spec, moments(spec, u)); }
double nehari(const ProblemSpec& spec, const Field& u) { return nehari_from(spec, moments(spec, u)); }
double i_one(const ProblemSpec& spec, const Field& u) { return i_one_from(spec, moments(spec, u)); }
double pohozaev_p(const ProblemSpec& spec, const Field& u) { return pohozaev_p_from(spec, moments(spec, u)); }
double j_three(const ProblemSpec& spec, const Field& u) { return j_three_from(spec, moments(spec, u)); }
double pohozaev_residual(const ProblemSpec& spec, const Field& u) {
    return pohozaev_residual_from(spec, moments(spec, u));
}

Field action_gradient(const ProblemSpec& spec, const Field& u) {
    Field g = apply_symbol(u, spec.sigma);
    kernels::axpy(spec.c, u.data(), g.data(), g.values.size());
    Field f = nonlinearity(spec, u);
    kernels::axpy(-1.0, f.data(), g.data(), g.values.size());
    return g;
}

double g_c(double c, double p, double q, double s) {
    return 0.5 * c * s * s - std::pow(std::abs(s), p + 1.0) / (p + 1.0) +
           std::pow(std::abs(s), q + 1.0) / (q + 1.0);
}

double g_c(const ProblemSpec& spec, double s) { return g_c(spec.c, spec.p, spec.q, s); }

ThresholdConstants c_zero(double p, double q) {
    if (!std::isfinite(p) || !std::isfinite(q) || !(p > 1.0) || !(q > p))
        throw DomainError("c_zero: powers must satisfy 1 < p < q");
    ThresholdConstants t;
    t.alpha = (q - 1.0) / (q - p);
    t.beta = (p - 1.0) / (q - p);
    t.c0 = 2.0 * (q - p) * std::pow(p - 1.0, t.beta) * std::pow(q + 1.0, t.beta) /
           (std::pow(p + 1.0, t.alpha) * std::pow(q - 1.0, t.alpha));
#ifndef NDEBUG
    // Cross-check against a direct maximization of 2(s^{p-1}/(p+1) - s^{q-1}/(q+1)).
    {
        auto value = [&](double s) {
            return 2.0 * (std::pow(s, p - 1.0) / (p + 1.0) - std::pow(s, q - 1.0) / (q + 1.0));
        };
        const double s_star = std::pow((p - 1.0) * (q + 1.0) / ((p + 1.0) * (q - 1.0)), 1.0 / (q - p));
        double lo = s_star / 8.0, hi = s_star * 8.0;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = value(x1), f2 = value(x2);
        for (int it = 0; it < 200; ++it) {
            if (f1 < f2) {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + gr * (hi - lo); f2 = value(x2);
            } else {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - gr * (hi - lo); f1 = value(x1);
            }
        }
        assert(std::abs(std::max(f1, f2) - t.c0) <= 1e-8 * t.c0);
    }
#endif
    return t;
}

}  // namespace fracground
