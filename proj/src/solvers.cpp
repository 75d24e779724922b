#include "fracground/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracground/kernels.hpp"
#include "fracground/rearrange.hpp"
#include "fracground/report_io.hpp"
#include "fracground/spectral.hpp"

namespace fracground {

std::string to_string(InitialProfile p) {
    switch (p) {
        case InitialProfile::gaussian: return "gaussian";
        case InitialProfile::lorentzian: return "lorentzian";
        case InitialProfile::sech2: return "sech2";
        case InitialProfile::file: return "file";
    }
    throw DomainError("to_string: unknown initial profile");
}

InitialProfile initial_profile_from_string(const std::string& name) {
    if (name == "gaussian") return InitialProfile::gaussian;
    if (name == "lorentzian") return InitialProfile::lorentzian;
    if (name == "sech2") return InitialProfile::sech2;
    if (name == "file") return InitialProfile::file;
    throw DomainError("initial_profile_from_string: unknown profile '" + name + "'");
}

void SolverConfig::validate() const {
    if (max_iter < 1) throw DomainError("SolverConfig: max_iter must be at least 1");
    if (!(grad_tol >= 1e-12) || !(grad_tol < 1.0)) throw DomainError("SolverConfig: grad_tol must lie in [1e-12, 1)");
    if (!(step > 0.0) || !(step <= 100.0)) throw DomainError("SolverConfig: step must lie in (0, 100]");
    if (recenter_every < 0) throw DomainError("SolverConfig: recenter_every must be nonnegative");
    if (!(init_amplitude > 0.0) || !std::isfinite(init_amplitude))
        throw DomainError("SolverConfig: init_amplitude must be positive");
    if (!(init_width > 0.0) || !std::isfinite(init_width))
        throw DomainError("SolverConfig: init_width must be positive");
    if (initial_profile == InitialProfile::file && init_file.empty())
        throw DomainError("SolverConfig: initial_profile=file requires init_file");
}

namespace detail {

double nehari_root(double a, double B, double G, double p, double q) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("nehari_root: quadratic coefficient must be positive");
    if (B >= 0.0 && G >= 0.0)
        throw NoRootError("nehari_root: all coefficients nonnegative, the scaling polynomial has no root");
    auto psi = [&](double t) { return a + B * std::pow(t, p - 1.0) + G * std::pow(t, q - 1.0); };

    double lo = 0.0, hi = 0.0;
    if (B < 0.0 && G > 0.0) {
        // Mixed signs with a rising tail: psi may dip below zero on a bounded window,
        // so locate the first crossing by a geometric scan.
        double prev = 1e-12;
        if (psi(prev) <= 0.0) throw NoRootError("nehari_root: no positive leading bracket");
        const double factor = std::pow(2.0, 0.25);
        double t = prev;
        bool found = false;
        for (int i = 0; i < 2400; ++i) {
            t *= factor;
            if (psi(t) < 0.0) {
                lo = prev;
                hi = t;
                found = true;
                break;
            }
            prev = t;
        }
        if (!found) throw NoRootError("nehari_root: scaling polynomial never crosses zero");
    } else {
        // At most one crossing: psi(0) = a > 0, find an upper end with psi < 0.
        hi = 1.0;
        if (psi(hi) > 0.0) {
            bool found = false;
            for (int i = 0; i < 600; ++i) {
                lo = hi;
                hi *= 2.0;
                if (!(psi(hi) > 0.0)) {
                    found = true;
                    break;
                }
            }
            if (!found) throw NoRootError("nehari_root: scaling polynomial never crosses zero");
        }
    }
    for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (psi(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

double nehari_scaling(const ProblemSpec& spec, const Field& u) {
    spec.validate();
    const Moments m = moments(spec, u);
    const double a = m.kinetic + spec.c * m.mass;
    if (!(a > 0.0)) throw DomainError("nehari_scaling: field must be nonzero");
    const auto [ep, eq] = term_signs(spec.variant);
    return detail::nehari_root(a, -ep * m.pmom, -eq * m.qmom, spec.p, spec.q);
}

namespace {

double sech2_stable(double t) {
    const double e = std::exp(-2.0 * std::abs(t));
    const double d = 1.0 + e;
    return 4.0 * e / (d * d);
}

}  // namespace

Field initial_guess(const GridSpec& grid, const SolverConfig& config) {
    grid.validate();
    config.validate();
    const double a = config.init_amplitude;
    const double w = config.init_width;
    switch (config.initial_profile) {
        case InitialProfile::gaussian:
            return Field::sample(grid, [&](double x) { return a * std::exp(-(x / w) * (x / w)); });
        case InitialProfile::lorentzian:
            return Field::sample(grid, [&](double x) { return a / (1.0 + (x / w) * (x / w)); });
        case InitialProfile::sech2:
            return Field::sample(grid, [&](double x) { return a * sech2_stable(x / w); });
        case InitialProfile::file: {
            Field f = read_field_csv(config.init_file);
            if (f.grid.N != grid.N || std::abs(f.grid.L - grid.L) > 1e-9 * grid.L)
                throw GridMismatchError("initial_guess: profile file grid does not match the requested grid");
            f.grid = grid;
            return f;
        }
    }
    throw DomainError("initial_guess: unknown profile");
}

Field recenter(const Field& u) {
    const double peak = kernels::max_abs(u.data(), u.values.size());
    if (!(peak > 0.0)) throw DomainError("recenter: field is identically zero");
    const auto idx = static_cast<long>(kernels::argmax_abs(u.data(), u.values.size()));
    return circular_shift(u, u.grid.center() - idx);
}

namespace {

// Shared working state for the manifold descent: the iterate, its coefficients, its
// power transforms and the four moment integrals, kept consistent under scaling.
struct IterState {
    Field u;
    Spectrum hat;
    std::vector<double> sp;  // sign(u)|u|^p
    std::vector<double> sq;  // sign(u)|u|^q  (unused single-power: zeros)
    double kin = 0.0, mass = 0.0, pm = 0.0, qm = 0.0;
};

void refresh_state(IterState& st, const ProblemSpec& spec, bool two_term) {
    const size_t n = st.u.values.size();
    st.hat = forward(st.u);
    st.kin = kinetic_sq(st.hat, spec.sigma);
    st.mass = st.u.grid.h() * kernels::sum_sq(st.u.data(), n);
    st.sp.resize(n);
    st.sq.assign(n, 0.0);
    kernels::signed_pow(st.u.data(), st.sp.data(), n, spec.p);
    st.pm = st.u.grid.h() * kernels::dot(st.sp.data(), st.u.data(), n);
    if (two_term) {
        kernels::signed_pow(st.u.data(), st.sq.data(), n, spec.q);
        st.qm = st.u.grid.h() * kernels::dot(st.sq.data(), st.u.data(), n);
    } else {
        st.qm = 0.0;
    }
}

void scale_state(IterState& st, const ProblemSpec& spec, double lambda) {
    const size_t n = st.u.values.size();
    kernels::scale(st.u.data(), n, lambda);
    kernels::scale(st.hat.coeff.data(), n, lambda);
    kernels::scale(st.sp.data(), n, std::pow(lambda, spec.p));
    kernels::scale(st.sq.data(), n, std::pow(lambda, spec.q));
    st.kin *= lambda * lambda;
    st.mass *= lambda * lambda;
    st.pm *= std::pow(lambda, spec.p + 1.0);
    st.qm *= std::pow(lambda, spec.q + 1.0);
}

// D^sigma u from cached coefficients (extra scale folded in).
Field symbol_apply_scaled(const Spectrum& hat, const std::vector<double>& sym, double factor) {
    Spectrum tmp = hat;
    kernels::apply_real_symbol(tmp.coeff.data(), sym.data(), tmp.coeff.size());
    if (factor != 1.0) kernels::scale(tmp.coeff.data(), tmp.coeff.size(), factor);
    return inverse(tmp);
}

double stability_step_cap(const GridSpec& grid, double sigma, double extra) {
    const double xi_top = std::pow(grid.xi_abs(grid.N / 2), sigma);
    return 0.9 / (xi_top + extra);
}

void finalize_report(GroundStateReport& rep, const ProblemSpec& spec) {
    const Moments m = moments(spec, rep.profile);
    rep.action = action_from(spec, m);
    rep.nehari_value = nehari_from(spec, m);
    rep.pohozaev = pohozaev_residual_from(spec, m);
    const Field g = action_gradient(spec, rep.profile);
    const double un = l2_norm(rep.profile);
    rep.el_residual = un > 0.0 ? l2_norm(g) / un : std::numeric_limits<double>::infinity();
    rep.d_estimate = rep.action;
}

}  // namespace

GroundStateReport minimize_nehari(const ProblemSpec& spec, const GridSpec& grid, const SolverConfig& config,
                                  SolveTrace* trace) {
    spec.validate();
    grid.validate();
    config.validate();
    switch (spec.variant) {
        case Variant::sp3:
            throw UnsupportedVariantError(
                "minimize_nehari: the focusing-defocusing shape is solved by minimize_pohozaev");
        case Variant::sp4:
            throw TrivialityError("minimize_nehari: the defocusing-defocusing shape has no nontrivial states");
        case Variant::integer_sp:
            throw UnsupportedVariantError(
                "minimize_nehari: integer-power signed problems are handled by classify");
        default: break;
    }
    const bool two_term = spec.variant != Variant::single_power;
    const auto [ep, eq] = term_signs(spec.variant);
    const size_t n = static_cast<size_t>(grid.N);
    const double h = grid.h();
    auto sym = symbol_table(grid, spec.sigma);

    IterState st;
    st.u = rearrangement(initial_guess(grid, config));
    refresh_state(st, spec, two_term);

    auto project = [&]() {
        const double a = st.kin + spec.c * st.mass;
        const double lambda = detail::nehari_root(a, -ep * st.pm, -eq * st.qm, spec.p, spec.q);
        scale_state(st, spec, lambda);
        if (trace) {
            const double k = st.kin + spec.c * st.mass - (ep * st.pm + eq * st.qm);
            trace->projection_checks.push_back(std::abs(k) / (st.kin + spec.c * st.mass));
        }
    };
    auto action_of_state = [&]() {
        return 0.5 * st.kin + 0.5 * spec.c * st.mass - (ep * st.pm / (spec.p + 1.0) + eq * st.qm / (spec.q + 1.0));
    };

    project();
    double s_cur = action_of_state();

    // Descent direction: the gradient preconditioned by the resolvent of the linear
    // part, d = u - (D^sigma + c)^{-1} f(u). The trial point is then the convex
    // combination (1 - tau) u + tau (D^sigma + c)^{-1} f(u), whose coefficients come
    // from the cached spectra without another transform; the contraction rate of the
    // preconditioned iteration does not degrade with resolution.
    std::vector<double> symc(n), res_w(n);
    for (size_t i = 0; i < n; ++i) {
        symc[i] = (*sym)[i] + spec.c;
        res_w[i] = 1.0 / symc[i];
    }

    const double cap = 1.0;
    double step = std::min(config.step, cap);
    const double floor_step = 1e-18;

    Field fu(grid), w(grid), v(grid);
    std::vector<double> spv(n), sqv(n, 0.0);
    Spectrum fhat, vhat(grid);

    int halvings = 0;
    int iterations = 0;
    bool converged = false;
    bool stagnated = false;

    for (int it = 1; it <= config.max_iter && !converged && !stagnated; ++it) {
        iterations = it;
        // f(u) from the cached power transforms; the Euler-Lagrange residual
        // (|xi|^sigma + c) u^ - f^ is assembled in coefficient space.
        kernels::lincomb(ep, st.sp.data(), eq, st.sq.data(), fu.data(), n);
        fhat = forward(fu);
        vhat.coeff = st.hat.coeff;
        kernels::apply_real_symbol(vhat.coeff.data(), symc.data(), n);
        kernels::lincomb(1.0, vhat.coeff.data(), -1.0, fhat.coeff.data(), vhat.coeff.data(), n);

        const double el = spectral_l2_norm(vhat) / std::sqrt(st.mass);
        if (el <= config.grad_tol) {
            iterations = it - 1;
            converged = true;
            break;
        }

        kernels::apply_real_symbol(fhat.coeff.data(), res_w.data(), n);
        w = inverse(fhat);

        bool accepted = false;
        while (!accepted) {
            kernels::lincomb(1.0 - step, st.u.data(), step, w.data(), v.data(), n);
            kernels::lincomb(1.0 - step, st.hat.coeff.data(), step, fhat.coeff.data(), vhat.coeff.data(), n);
            const double kin_v = kinetic_sq(vhat, spec.sigma);
            const double mass_v = h * kernels::sum_sq(v.data(), n);
            kernels::signed_pow(v.data(), spv.data(), n, spec.p);
            const double pm_v = h * kernels::dot(spv.data(), v.data(), n);
            double qm_v = 0.0;
            if (two_term) {
                kernels::signed_pow(v.data(), sqv.data(), n, spec.q);
                qm_v = h * kernels::dot(sqv.data(), v.data(), n);
            }
            double lambda = 0.0;
            bool have_root = true;
            try {
                lambda = detail::nehari_root(kin_v + spec.c * mass_v, -ep * pm_v, -eq * qm_v, spec.p, spec.q);
            } catch (const NoRootError&) {
                have_root = false;
            } catch (const DomainError&) {
                have_root = false;
            }
            double s_new = std::numeric_limits<double>::infinity();
            if (have_root) {
                const double l2 = lambda * lambda;
                const double lp1 = std::pow(lambda, spec.p + 1.0);
                const double lq1 = std::pow(lambda, spec.q + 1.0);
                s_new = 0.5 * l2 * kin_v + 0.5 * spec.c * l2 * mass_v -
                        (ep * lp1 * pm_v / (spec.p + 1.0) + eq * lq1 * qm_v / (spec.q + 1.0));
            }
            if (std::isfinite(s_new) && s_new <= s_cur + 1e-13 * std::max(1.0, std::abs(s_cur))) {
                std::swap(st.u.values, v.values);
                std::swap(st.hat.coeff, vhat.coeff);
                std::swap(st.sp, spv);
                std::swap(st.sq, sqv);
                st.kin = kin_v;
                st.mass = mass_v;
                st.pm = pm_v;
                st.qm = qm_v;
                scale_state(st, spec, lambda);
                s_cur = action_of_state();
                step = std::min(step * 1.25, cap);
                accepted = true;
                if (trace) {
                    trace->action_values.push_back(s_cur);
                    const double k = st.kin + spec.c * st.mass - (ep * st.pm + eq * st.qm);
                    trace->projection_checks.push_back(std::abs(k) / (st.kin + spec.c * st.mass));
                }
            } else {
                step *= 0.5;
                ++halvings;
                if (step < floor_step) break;
            }
        }
        if (!accepted) {
            stagnated = true;
            break;
        }

        if (config.recenter_every > 0 && it % config.recenter_every == 0) {
            st.u = rearrangement(st.u);
            refresh_state(st, spec, two_term);
            project();
            s_cur = action_of_state();
        }
    }

    GroundStateReport rep;
    rep.profile = st.u;
    rep.spec = spec;
    rep.iterations = iterations;
    rep.halvings = halvings;
    finalize_report(rep, spec);
    rep.converged = rep.el_residual <= config.grad_tol;
    if (trace) trace->halvings = halvings;
    return rep;
}

namespace {

// Scaling polynomial of the zero-mass-constraint projection: for w with unit L2 norm,
// P_c(t w)/t^2 = -c/2 + t^{p-1} pm/(p+1) - t^{q-1} qm/(q+1).
struct RhoPoly {
    double c, p, q, pm, qm;
    double operator()(double t) const {
        return -0.5 * c + std::pow(t, p - 1.0) * pm / (p + 1.0) - std::pow(t, q - 1.0) * qm / (q + 1.0);
    }
    double peak_arg() const {
        return std::pow((p - 1.0) * pm * (q + 1.0) / ((q - 1.0) * qm * (p + 1.0)), 1.0 / (q - p));
    }
};

// Smaller positive root of rho; requires rho(peak) >= 0.
double rho_smaller_root(const RhoPoly& rho) {
    const double peak = rho.peak_arg();
    if (!(rho(peak) >= 0.0)) throw NoRootError("pohozaev projection: constraint polynomial stays negative");
    double lo = peak;
    while (rho(lo) >= 0.0) {
        lo *= 0.25;
        if (lo < 1e-300) throw NoRootError("pohozaev projection: no lower bracket");
    }
    double hi = peak;
    for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (rho(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct ConstraintQuantities {
    double mass = 0.0, pm = 0.0, qm = 0.0;
    double p_value(double c, double p, double q) const {
        return -0.5 * c * mass + pm / (p + 1.0) - qm / (q + 1.0);
    }
    // d/dt P_c(u + t u)|_0 = <P_c'(u), u>
    double p_derivative_pairing(double c) const { return -c * mass + pm - qm; }
};

ConstraintQuantities constraint_quantities(const Field& u, const ProblemSpec& spec, std::vector<double>& sp,
                                           std::vector<double>& sq) {
    const size_t n = u.values.size();
    const double h = u.grid.h();
    sp.resize(n);
    sq.resize(n);
    kernels::signed_pow(u.data(), sp.data(), n, spec.p);
    kernels::signed_pow(u.data(), sq.data(), n, spec.q);
    ConstraintQuantities cq;
    cq.mass = h * kernels::sum_sq(u.data(), n);
    cq.pm = h * kernels::dot(sp.data(), u.data(), n);
    cq.qm = h * kernels::dot(sq.data(), u.data(), n);
    return cq;
}

// Mass fraction carried by the outer 10% of the domain.
double boundary_mass_fraction(const Field& u) {
    const size_t n = u.values.size();
    const double edge = 0.9 * u.grid.L;
    double boundary = 0.0, total = 0.0;
    for (size_t m = 0; m < n; ++m) {
        const double x = u.grid.node(static_cast<int>(m));
        const double s = u.values[m] * u.values[m];
        total += s;
        if (std::abs(x) >= edge) boundary += s;
    }
    return total > 0.0 ? boundary / total : 0.0;
}

// Average u with its reflection through x = 0 (index map m -> (N - m) mod N).
// The even subspace is invariant under the equation and excludes the
// translation zero mode of the linearization.
void symmetrize_even(Field& u) {
    const size_t n = u.values.size();
    for (size_t m = 1; m < n - m; ++m) {
        const double avg = 0.5 * (u.values[m] + u.values[n - m]);
        u.values[m] = avg;
        u.values[n - m] = avg;
    }
}

// Inexact solve of the preconditioned Newton system (I - M W) d = M r, where W
// multiplies pointwise by w and M is the resolvent of D^sigma + c.  Since
// M (D^sigma + c - W) = I - M W, one Krylov application costs a single
// resolvent call, and the compact perturbation structure keeps restarted
// GMRES cycles short.  Returns the best iterate; the caller's line search
// judges whether it is a usable step.
Field newton_direction(const Field& r, const std::vector<double>& w, double sigma, double c, double rel_tol) {
    const GridSpec& grid = r.grid;
    const size_t n = r.values.size();
    const double h = grid.h();

    auto apply = [&](const std::vector<double>& vin, std::vector<double>& vout) {
        Field t(grid);
        kernels::multiply(w.data(), vin.data(), t.values.data(), n);
        Spectrum th = forward(t);
        resolvent_inplace(th, sigma, c);
        const Field mt = inverse(th);
        kernels::lincomb(1.0, vin.data(), -1.0, mt.values.data(), vout.data(), n);
    };

    const Field rhs = resolvent(r, sigma, c);
    const double bnorm = std::sqrt(h * kernels::sum_sq(rhs.data(), n));
    Field d(grid);
    if (!(bnorm > 0.0)) return d;

    constexpr int basis = 48;
    constexpr int cycles = 3;
    std::vector<std::vector<double>> V;
    V.reserve(basis + 1);
    std::vector<double> H(static_cast<size_t>(basis + 1) * basis);
    std::vector<double> gs(basis + 1), cs(basis), sn(basis), y(basis);
    std::vector<double> res(n), work(n);

    for (int cycle = 0; cycle < cycles; ++cycle) {
        if (cycle == 0) {
            res = rhs.values;
        } else {
            apply(d.values, res);
            kernels::lincomb(1.0, rhs.data(), -1.0, res.data(), res.data(), n);
        }
        const double rn = std::sqrt(h * kernels::sum_sq(res.data(), n));
        if (!(rn > rel_tol * bnorm)) return d;

        V.assign(1, res);
        kernels::scale(V[0].data(), n, 1.0 / rn);
        std::fill(gs.begin(), gs.end(), 0.0);
        std::fill(H.begin(), H.end(), 0.0);
        gs[0] = rn;

        int k = 0;
        bool solved = false;
        while (k < basis && !solved) {
            apply(V[k], work);
            // Modified Gram-Schmidt in the h-weighted inner product.
            for (int i = 0; i <= k; ++i) {
                const double hik = h * kernels::dot(work.data(), V[i].data(), n);
                H[static_cast<size_t>(i) * basis + k] = hik;
                kernels::axpy(-hik, V[i].data(), work.data(), n);
            }
            const double hsub = std::sqrt(h * kernels::sum_sq(work.data(), n));
            for (int i = 0; i < k; ++i) {
                const double t1 = cs[i] * H[static_cast<size_t>(i) * basis + k] +
                                  sn[i] * H[static_cast<size_t>(i + 1) * basis + k];
                const double t2 = -sn[i] * H[static_cast<size_t>(i) * basis + k] +
                                  cs[i] * H[static_cast<size_t>(i + 1) * basis + k];
                H[static_cast<size_t>(i) * basis + k] = t1;
                H[static_cast<size_t>(i + 1) * basis + k] = t2;
            }
            const double diag = H[static_cast<size_t>(k) * basis + k];
            const double rho = std::hypot(diag, hsub);
            if (!(rho > 0.0)) {
                solved = true;
                break;
            }
            cs[k] = diag / rho;
            sn[k] = hsub / rho;
            H[static_cast<size_t>(k) * basis + k] = rho;
            gs[k + 1] = -sn[k] * gs[k];
            gs[k] *= cs[k];
            ++k;
            if (std::abs(gs[k]) <= rel_tol * bnorm || !(hsub > 0.0)) {
                solved = true;
                break;
            }
            V.push_back(work);
            kernels::scale(V.back().data(), n, 1.0 / hsub);
        }
        for (int i = k - 1; i >= 0; --i) {
            double s = gs[i];
            for (int j = i + 1; j < k; ++j) s -= H[static_cast<size_t>(i) * basis + j] * y[j];
            y[i] = s / H[static_cast<size_t>(i) * basis + i];
        }
        for (int i = 0; i < k; ++i) kernels::axpy(y[i], V[i].data(), d.values.data(), n);
        if (solved) return d;
    }
    return d;
}

// Damped Newton iteration on the even subspace for the continuation family
// r_theta(u) = D^sigma u + c u - |u|^{p-1} u + theta |u|^{q-1} u, theta in [0, 1].
class NewtonContinuation {
  public:
    NewtonContinuation(const ProblemSpec& spec, const GridSpec& grid, SolveTrace* trace)
        : spec_(spec),
          n_(static_cast<size_t>(grid.N)),
          symc_(n_),
          sp_(n_),
          sq_(n_),
          w_(n_),
          r_(grid),
          d_(grid),
          trial_(grid),
          rtrial_(grid),
          trace_(trace) {
        auto sym = symbol_table(grid, spec.sigma);
        for (size_t m = 0; m < n_; ++m) symc_[m] = (*sym)[m] + spec.c;
    }

    int iterations() const { return iterations_; }
    int halvings() const { return halvings_; }

    void residual(const Field& v, double theta, Field& out) {
        Spectrum vh = forward(v);
        kernels::apply_real_symbol(vh.coeff.data(), symc_.data(), n_);
        out = inverse(vh);
        kernels::signed_pow(v.data(), sp_.data(), n_, spec_.p);
        kernels::signed_pow(v.data(), sq_.data(), n_, spec_.q);
        kernels::axpy(-1.0, sp_.data(), out.values.data(), n_);
        kernels::axpy(theta, sq_.data(), out.values.data(), n_);
    }

    // Drives v toward a root of r_theta; true when ||r||/||v|| <= tol.
    bool stage(Field& v, double theta, int max_steps, double tol) {
        residual(v, theta, r_);
        double rnorm = l2_norm(r_);
        for (int step = 0; step < max_steps; ++step) {
            const double vnorm = l2_norm(v);
            if (!(vnorm > 0.0) || !std::isfinite(rnorm)) return false;
            const double rel = rnorm / vnorm;
            if (rel <= tol) return true;

            // f_theta'(v), the multiplier block of the linearization.
            kernels::abs_pow(v.data(), sp_.data(), n_, spec_.p - 1.0);
            kernels::abs_pow(v.data(), sq_.data(), n_, spec_.q - 1.0);
            kernels::lincomb(spec_.p, sp_.data(), -theta * spec_.q, sq_.data(), w_.data(), n_);

            const double forcing = std::max(std::min(1e-2, 0.1 * rel), 1e-9);
            d_ = newton_direction(r_, w_, spec_.sigma, spec_.c, forcing);
            symmetrize_even(d_);

            // Cap the update so the iterate stays in the amplitude range where
            // the linearization is informative.
            const double peak = kernels::max_abs(v.data(), n_);
            const double cap = 0.4 * std::max(peak, 0.02);
            const double dmax = kernels::max_abs(d_.data(), n_);
            if (dmax > cap) kernels::scale(d_.data(), n_, cap / dmax);

            bool accepted = false;
            double t = 1.0;
            for (int bt = 0; bt < 25; ++bt) {
                kernels::lincomb(1.0, v.data(), -t, d_.data(), trial_.values.data(), n_);
                residual(trial_, theta, rtrial_);
                const double rnew = l2_norm(rtrial_);
                if (std::isfinite(rnew) && rnew < rnorm * (1.0 - 1e-4 * t)) {
                    std::swap(v.values, trial_.values);
                    std::swap(r_.values, rtrial_.values);
                    rnorm = rnew;
                    accepted = true;
                    break;
                }
                t *= 0.5;
                ++halvings_;
            }
            if (!accepted) return false;
            ++iterations_;
            if (trace_) trace_->projection_checks.push_back(rnorm / l2_norm(v));
        }
        return rnorm <= tol * l2_norm(v);
    }

  private:
    ProblemSpec spec_;
    size_t n_;
    std::vector<double> symc_, sp_, sq_, w_;
    Field r_, d_, trial_, rtrial_;
    SolveTrace* trace_;
    int iterations_ = 0;
    int halvings_ = 0;
};

// sigma < 1: the level constraint {P_c = 1} only pins the dilation freedom, so
// the constrained minimizer is read off a direct Euler-Lagrange solution phi
// through the exact scaling laws P_c(u(./a)) = a P_c(u) and
// J(u(./a)) = a^{1-sigma} J(u).  phi itself is computed by continuation: the
// focusing-only profile seeds a damped Newton iteration on the even subspace
// while theta ramps the defocusing term from 0 up to 1.
GroundStateReport pohozaev_unit_level(const ProblemSpec& spec, const GridSpec& grid, const SolverConfig& config,
                                      SolveTrace* trace) {
    int iterations = 0;

    Field u(grid);
    if (config.initial_profile == InitialProfile::file) {
        u = rearrangement(initial_guess(grid, config));
    } else {
        // Seed from the focusing-only problem, whose profile lives at the same
        // amplitude scale c^{1/(p-1)} and width scale c^{-1/sigma}.
        ProblemSpec seed = spec;
        seed.variant = Variant::single_power;
        SolverConfig scfg = config;
        scfg.initial_profile = InitialProfile::lorentzian;
        scfg.init_amplitude = 1.5 * std::pow(spec.c, 1.0 / (spec.p - 1.0));
        scfg.init_width = std::min(std::pow(spec.c, -1.0 / spec.sigma), 0.05 * grid.L);
        scfg.grad_tol = 1e-12;
        scfg.max_iter = std::max(config.max_iter, 2000);
        int seed_iters = 0;
        u = petviashvili(seed, grid, scfg, &seed_iters);
        iterations += seed_iters;
    }
    symmetrize_even(u);

    NewtonContinuation newton(spec, grid, trace);
    const double newton_tol = 1e-12;

    double theta = 0.0;
    double dtheta = 0.25;
    Field stage(grid);
    if (config.initial_profile == InitialProfile::file) {
        // A supplied profile may already solve the full problem; try it first.
        stage = u;
        if (newton.stage(stage, 1.0, 30, newton_tol)) {
            u = stage;
            theta = 1.0;
        }
    }
    while (theta < 1.0) {
        const double next = std::min(1.0, theta + dtheta);
        stage = u;
        if (newton.stage(stage, next, 30, newton_tol)) {
            u = stage;
            theta = next;
        } else {
            dtheta *= 0.4;
            if (dtheta < 1e-3)
                throw ConvergenceError(
                    "minimize_pohozaev: continuation toward the defocusing term stalled; refine the grid or "
                    "enlarge L");
        }
    }
    iterations += newton.iterations();
    const int halvings = newton.halvings();

    const Moments mom = moments(spec, u);
    const double level = pohozaev_p_from(spec, mom);
    if (!(level > 0.0))
        throw StationarityError("minimize_pohozaev: converged profile has nonpositive constraint level P_c = " +
                                format_double(level));
    // <P_c'(u), u>; equals the kinetic term exactly at a solution, so the
    // ratio below only corrects for the residual left by the iteration.
    const double pairing = -spec.c * mom.mass + mom.pmom - mom.qmom;
    const double j_value = 0.5 * spec.sigma * std::pow(level, spec.sigma - 1.0) * mom.kinetic;
    const double mu = std::pow(level, -spec.sigma) * pairing / mom.kinetic;

    if (boundary_mass_fraction(u) > 1e-6)
        throw DomainError(
            "minimize_pohozaev: converged profile carries more than 1e-6 of its mass within 10% of the domain "
            "boundary; enlarge L");

    GroundStateReport rep;
    rep.profile = u;
    rep.spec = spec;
    rep.iterations = iterations;
    rep.halvings = halvings;
    finalize_report(rep, spec);
    rep.converged = rep.el_residual <= config.grad_tol;
    rep.multiplier = mu;
    rep.j3_value = j_value;
    if (trace) {
        trace->halvings = halvings;
        trace->action_values.push_back(rep.action);
    }
    return rep;
}

}  // namespace

GroundStateReport minimize_pohozaev(const ProblemSpec& spec, const GridSpec& grid, const SolverConfig& config,
                                    SolveTrace* trace) {
    spec.validate();
    grid.validate();
    config.validate();
    if (spec.variant != Variant::sp3)
        throw UnsupportedVariantError("minimize_pohozaev: requires the focusing-defocusing shape");
    const ThresholdConstants thr = c_zero(spec.p, spec.q);
    if (!(spec.c < thr.c0))
        throw ThresholdError("minimize_pohozaev: speed c = " + format_double(spec.c) +
                             " is not below the existence threshold c0 = " + format_double(thr.c0));

    if (spec.sigma < 1.0) return pohozaev_unit_level(spec, grid, config, trace);

    // sigma = 1: projected descent of J over {P_c = 0, ||u||_2 = 1}.
    const size_t n = static_cast<size_t>(grid.N);
    const double h = grid.h();
    auto sym = symbol_table(grid, spec.sigma);

    Field u(grid);
    std::vector<double> sp(n), sq(n);

    // ---- initial feasible point -------------------------------------------------
    {
        bool feasible = false;
        SolverConfig widened = config;
        for (int attempt = 0; attempt < 8 && !feasible; ++attempt) {
            Field cand = rearrangement(initial_guess(grid, widened));
            const double nv = l2_norm(cand);
            if (nv > 0.0) {
                kernels::scale(cand.data(), n, 1.0 / nv);
                const ConstraintQuantities cq = constraint_quantities(cand, spec, sp, sq);
                const RhoPoly rho{spec.c, spec.p, spec.q, cq.pm, cq.qm};
                if (rho(rho.peak_arg()) > 0.0) {
                    const double lambda = rho_smaller_root(rho);
                    kernels::scale(cand.data(), n, lambda);
                    u = cand;
                    feasible = true;
                }
            }
            widened.init_width *= 2.0;
        }
        if (!feasible)
            throw ThresholdError(
                "minimize_pohozaev: no admissible starting profile found; the speed may be too close to the "
                "existence threshold for this grid");
    }

    Spectrum hat = forward(u);
    double kin = kinetic_sq(hat, spec.sigma);
    ConstraintQuantities cq = constraint_quantities(u, spec, sp, sq);
    double j_cur = 0.5 * spec.sigma * kin;

    const double cap = stability_step_cap(grid, spec.sigma, spec.c + 1.0);
    double step = std::min(config.step, cap);
    const double floor_step = 1e-18;

    Field dj(grid), gp(grid), v(grid), phi(grid);
    std::vector<double> spv(n), sqv(n);

    int halvings = 0;
    int iterations = 0;
    bool converged = false;
    bool stagnated = false;
    double mu_final = 0.0;
    double el_final = std::numeric_limits<double>::infinity();
    bool have_candidate = false;

    // Candidate emission: undo the constraint normalization by the dilation that the
    // stationarity ratio dictates and test the genuine Euler-Lagrange residual.
    auto try_candidate = [&]() -> bool {
        const double ipp = cq.p_derivative_pairing(spec.c);
        if (!(ipp > 0.0) || !(kin > 0.0)) return false;
        const double r = kin / ipp;
        if (!(r > 0.0) || !std::isfinite(r)) return false;
        phi = dilate(u, std::pow(r, 1.0 / spec.sigma));
        const Field g = action_gradient(spec, phi);
        const double pn = l2_norm(phi);
        if (!(pn > 0.0)) return false;
        el_final = l2_norm(g) / pn;
        mu_final = 1.0 / r;
        have_candidate = true;
        return el_final <= config.grad_tol;
    };

    for (int it = 1; it <= config.max_iter && !converged && !stagnated; ++it) {
        iterations = it;
        // Objective gradient sigma * D^sigma u, projected tangentially to the constraints.
        dj = symbol_apply_scaled(hat, *sym, spec.sigma);
        kernels::lincomb(1.0, sp.data(), -1.0, sq.data(), gp.data(), n);
        kernels::axpy(-spec.c, u.data(), gp.data(), n);

        Field d = dj;
        {
            const double g11 = h * kernels::sum_sq(gp.data(), n);
            const double g12 = h * kernels::dot(gp.data(), u.data(), n);
            const double g22 = cq.mass;
            const double b1 = h * kernels::dot(dj.data(), gp.data(), n);
            const double b2 = h * kernels::dot(dj.data(), u.data(), n);
            const double det = g11 * g22 - g12 * g12;
            if (det > 1e-28 * std::max(g11 * g22, 1e-300)) {
                const double alpha = (b1 * g22 - b2 * g12) / det;
                const double beta = (g11 * b2 - g12 * b1) / det;
                kernels::axpy(-alpha, gp.data(), d.data(), n);
                kernels::axpy(-beta, u.data(), d.data(), n);
            } else if (g11 > 0.0) {
                kernels::axpy(-b1 / g11, gp.data(), d.data(), n);
            }
        }

        if (it % 25 == 0 && try_candidate()) {
            converged = true;
            break;
        }

        bool accepted = false;
        while (!accepted) {
            kernels::lincomb(1.0, u.data(), -step, d.data(), v.data(), n);
            bool ok = kernels::all_finite(v.data(), n);
            double j_new = std::numeric_limits<double>::infinity();
            Spectrum vhat;
            double kin_v = 0.0;
            ConstraintQuantities cq_v;
            Field w(grid);
            if (ok) {
                const double nv = std::sqrt(h * kernels::sum_sq(v.data(), n));
                if (nv > 0.0) {
                    kernels::scale(v.data(), n, 1.0 / nv);
                    cq_v = constraint_quantities(v, spec, spv, sqv);
                    const RhoPoly rho{spec.c, spec.p, spec.q, cq_v.pm, cq_v.qm};
                    try {
                        const double lambda = rho_smaller_root(rho);
                        kernels::scale(v.data(), n, lambda);
                        w.values = v.values;
                        vhat = forward(w);
                        kin_v = kinetic_sq(vhat, spec.sigma);
                        const double l2s = lambda * lambda;
                        cq_v.mass = l2s;  // exactly lambda^2 after unit normalization
                        cq_v.pm *= std::pow(lambda, spec.p + 1.0);
                        cq_v.qm *= std::pow(lambda, spec.q + 1.0);
                        j_new = 0.5 * spec.sigma * kin_v;
                    } catch (const NoRootError&) {
                        ok = false;
                    }
                } else {
                    ok = false;
                }
            }
            if (ok && std::isfinite(j_new) && j_new <= j_cur + 1e-13 * std::max(1.0, std::abs(j_cur))) {
                std::swap(u.values, w.values);
                std::swap(hat.coeff, vhat.coeff);
                // Power transforms stale after the lambda scaling; recompute cheaply.
                cq = constraint_quantities(u, spec, sp, sq);
                kin = kin_v;
                j_cur = j_new;
                step = std::min(step * 1.25, cap);
                accepted = true;
                if (trace) trace->action_values.push_back(j_cur);
            } else {
                step *= 0.5;
                ++halvings;
                if (step < floor_step) break;
            }
        }
        if (!accepted) {
            stagnated = true;
            break;
        }

        if (config.recenter_every > 0 && it % config.recenter_every == 0) {
            // Rearrangement preserves every L^r norm, so P_c survives up to roundoff.
            u = rearrangement(u);
            cq = constraint_quantities(u, spec, sp, sq);
            hat = forward(u);
            kin = kinetic_sq(hat, spec.sigma);
            j_cur = 0.5 * spec.sigma * kin;
        }
    }

    if (!converged) {
        // Emit the best candidate the final iterate defines.
        if (!try_candidate() && !have_candidate) {
            const double ipp = cq.p_derivative_pairing(spec.c);
            throw StationarityError(
                "minimize_pohozaev: stationarity ratio is not positive at the final iterate (<P_c'(u),u> = " +
                format_double(ipp) + ")");
        }
    }

    // The dilated candidate solves the equation only as well as the manifold
    // iterate approximates the minimizer; damped Newton steps finish the local
    // convergence without leaving the basin the descent identified.
    {
        NewtonContinuation newton(spec, grid, trace);
        newton.stage(phi, 1.0, 40, 1e-12);
        const Field g = action_gradient(spec, phi);
        const double pn = l2_norm(phi);
        if (pn > 0.0) el_final = l2_norm(g) / pn;
        iterations += newton.iterations();
        halvings += newton.halvings();
    }
    converged = el_final <= config.grad_tol;

    // J is dilation-invariant at sigma = 1, so the polished profile evaluates
    // the constrained objective directly.
    const double j_value = 0.5 * spec.sigma * moments(spec, phi).kinetic;

    if (boundary_mass_fraction(phi) > 1e-6)
        throw DomainError(
            "minimize_pohozaev: rescaled profile carries more than 1e-6 of its mass within 10% of the domain "
            "boundary; enlarge L");

    GroundStateReport rep;
    rep.profile = phi;
    rep.spec = spec;
    rep.iterations = iterations;
    rep.halvings = halvings;
    finalize_report(rep, spec);
    rep.converged = converged && rep.el_residual <= config.grad_tol;
    rep.multiplier = mu_final;
    rep.j3_value = j_value;
    if (trace) trace->halvings = halvings;
    return rep;
}

Field petviashvili(const ProblemSpec& spec, const GridSpec& grid, const SolverConfig& config,
                   int* iterations) {
    spec.validate();
    grid.validate();
    config.validate();
    if (spec.variant != Variant::single_power)
        throw UnsupportedVariantError("petviashvili: requires the single-power shape");

    const size_t n = static_cast<size_t>(grid.N);
    const double h = grid.h();
    const double gamma = spec.p / (spec.p - 1.0);
    auto sym = symbol_table(grid, spec.sigma);
    std::vector<double> res_weights(n);
    for (size_t i = 0; i < n; ++i) res_weights[i] = 1.0 / ((*sym)[i] + spec.c);

    Field u = initial_guess(grid, config);
    if (!(kernels::max_abs(u.data(), n) > 0.0)) throw DomainError("petviashvili: zero initial profile");
    Spectrum hat = forward(u);

    std::vector<double> fu(n);
    for (int it = 1; it <= config.max_iter; ++it) {
        kernels::signed_pow(u.data(), fu.data(), n, spec.p);
        const double num = kinetic_sq(hat, spec.sigma) + spec.c * h * kernels::sum_sq(u.data(), n);
        const double den = h * kernels::dot(fu.data(), u.data(), n);
        const double m = num / den;
        if (!std::isfinite(m) || m < 1e-6 || m > 1e6)
            throw DivergenceError("petviashvili: normalization factor left [1e-6, 1e6]");

        Field fv(grid);
        fv.values.assign(fu.begin(), fu.end());
        Spectrum fhat = forward(fv);
        kernels::apply_real_symbol(fhat.coeff.data(), res_weights.data(), n);
        kernels::scale(fhat.coeff.data(), n, std::pow(m, gamma));
        Field next = inverse(fhat);

        double diff = 0.0;
        {
            std::vector<double> tmp(n);
            kernels::lincomb(1.0, next.data(), -1.0, u.data(), tmp.data(), n);
            diff = std::sqrt(kernels::sum_sq(tmp.data(), n) / std::max(kernels::sum_sq(u.data(), n), 1e-300));
        }
        u.values = next.values;
        hat.coeff = fhat.coeff;
        if (iterations) *iterations = it;
        if (diff <= config.grad_tol) return u;
    }
    throw ConvergenceError("petviashvili: no convergence within max_iter");
}

}  // namespace fracground
