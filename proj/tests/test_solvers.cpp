#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fracground/errors.hpp"
#include "fracground/report_io.hpp"
#include "fracground/solvers.hpp"
#include "fracground/spectral.hpp"

using namespace fracground;

namespace {

constexpr double pi = std::numbers::pi;

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

double ratio_l2_diff(const Field& a, const Field& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        num += d * d;
        den += b.values[i] * b.values[i];
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("scaling-polynomial root finder on closed forms") {
    // 1 - 3t + t^2: first positive root (3 - sqrt(5))/2
    CHECK(detail::nehari_root(1.0, -3.0, 1.0, 2.0, 3.0) ==
          doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    // single-power branch: root (a/|B|)^{1/(p-1)}
    CHECK(detail::nehari_root(1.0, -2.0, 0.0, 2.0, 3.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(detail::nehari_root(4.0, -1.0, 0.0, 3.0, 4.0) == doctest::Approx(2.0).epsilon(1e-12));
    // quartic variant of the same quadratic: roots in t^2
    const double t2 = (3.0 - std::sqrt(5.0)) / 2.0;
    CHECK(detail::nehari_root(1.0, -3.0, 1.0, 3.0, 5.0) == doctest::Approx(std::sqrt(t2)).epsilon(1e-12));
    // no sign change: no root
    CHECK_THROWS_AS(detail::nehari_root(1.0, 1.0, 1.0, 2.0, 3.0), NoRootError);
}

TEST_CASE("nehari_scaling lands on the constraint manifold") {
    const GridSpec g{30.0, 1024};
    const ProblemSpec spec(1.0, 0.8, 2.0, 3.0, Variant::sp1);
    const Field u = Field::sample(g, [](double x) { return 1.3 * std::exp(-0.4 * x * x); });
    const double t = nehari_scaling(spec, u);
    REQUIRE(t > 0.0);
    Field v = u;
    for (auto& w : v.values) w *= t;
    const double h = hsc_norm(v, spec.sigma, spec.c);
    CHECK(std::abs(nehari(spec, v)) <= 1e-9 * h * h);
}

TEST_CASE("initial profiles have the requested shape") {
    const GridSpec g{20.0, 256};
    SolverConfig config;
    config.init_amplitude = 2.5;
    config.init_width = 1.5;

    for (InitialProfile p : {InitialProfile::gaussian, InitialProfile::lorentzian, InitialProfile::sech2}) {
        config.initial_profile = p;
        const Field u = initial_guess(g, config);
        CHECK(u.values[std::size_t(g.center())] == doctest::Approx(2.5).epsilon(1e-12));
        for (std::size_t m = 1; m + 1 < u.values.size(); ++m) {
            const std::size_t mirror = u.values.size() - m;
            if (m < mirror) CHECK(u.values[m] == doctest::Approx(u.values[mirror]).epsilon(1e-12));
        }
        CHECK(initial_profile_from_string(to_string(p)) == p);
    }
    CHECK_THROWS_AS(initial_profile_from_string("bessel"), DomainError);
}

TEST_CASE("file-based initial profile round-trips") {
    namespace fs = std::filesystem;
    const GridSpec g{20.0, 256};
    const Field seed_profile = Field::sample(g, [](double x) { return std::exp(-x * x / 9.0); });
    const fs::path p = fs::temp_directory_path() / "fracground_solver_init.csv";
    write_field_csv(p.string(), seed_profile);

    SolverConfig config;
    config.initial_profile = InitialProfile::file;
    config.init_file = p.string();
    const Field u = initial_guess(g, config);
    CHECK(u.values == seed_profile.values);

    SolverConfig bad = config;
    bad.init_file.clear();
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("recenter moves the modulus peak to the center node") {
    const GridSpec g{20.0, 256};
    Field u = Field::sample(g, [](double x) { return std::exp(-(x - 4.0) * (x - 4.0)); });
    const Field r = recenter(u);
    CHECK(std::size_t(std::max_element(r.values.begin(), r.values.end()) - r.values.begin()) ==
          std::size_t(g.center()));
    const Field again = recenter(r);
    CHECK(again.values == r.values);
    std::vector<double> a = u.values, b = r.values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
}

TEST_CASE("solver config validation") {
    SolverConfig config;
    CHECK_NOTHROW(config.validate());
    SolverConfig bad = config;
    bad.max_iter = 0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = config;
    bad.grad_tol = 1e-13;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = config;
    bad.step = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = config;
    bad.init_width = -1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = config;
    bad.recenter_every = -1;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("quadratic single-power state matches the algebraic soliton") {
    const GridSpec g{200.0, 8192};
    const ProblemSpec spec(1.0, 1.0, 2.0, 3.0, Variant::single_power);
    SolverConfig config;
    config.grad_tol = 1e-10;

    const GroundStateReport rep = minimize_nehari(spec, g, config);
    REQUIRE(rep.converged);
    CHECK(rep.el_residual <= 1e-10);

    const Field exact = Field::sample(g, [](double x) { return 2.0 / (1.0 + x * x); });
    CHECK(max_abs_diff(rep.profile, exact) <= 5e-4);
    CHECK(rep.action == doctest::Approx(pi / 2).epsilon(1e-3));
    CHECK(l2_norm(rep.profile) * l2_norm(rep.profile) == doctest::Approx(2 * pi).epsilon(1e-3));

    int iters = 0;
    const Field petv = petviashvili(spec, g, config, &iters);
    CHECK(iters > 0);
    CHECK(max_abs_diff(petv, exact) <= 5e-4);
    CHECK(ratio_l2_diff(petv, rep.profile) <= 1e-6);
}

TEST_CASE("descent trace is monotone and stays on the manifold") {
    const GridSpec g{60.0, 2048};
    const ProblemSpec spec(1.5, 1.0, 2.0, 3.0, Variant::sp1);
    SolverConfig config;
    config.grad_tol = 1e-9;
    SolveTrace trace;
    const GroundStateReport rep = minimize_nehari(spec, g, config, &trace);
    REQUIRE(rep.converged);
    CHECK(rep.el_residual <= 1e-9);
    CHECK(std::abs(rep.nehari_value) <=
          1e-8 * hsc_norm(rep.profile, spec.sigma, spec.c) * hsc_norm(rep.profile, spec.sigma, spec.c));

    REQUIRE(trace.action_values.size() > 1);
    for (std::size_t i = 1; i < trace.action_values.size(); ++i)
        CHECK(trace.action_values[i] <= trace.action_values[i - 1] + 1e-12);
    for (double chk : trace.projection_checks) CHECK(std::abs(chk) <= 1e-9);
    CHECK(rep.action > 0.0);
}

TEST_CASE("all-focusing and focusing-only variants accept the manifold solver") {
    const GridSpec g{60.0, 2048};
    SolverConfig config;
    config.grad_tol = 1e-8;
    const GroundStateReport sp2 = minimize_nehari(ProblemSpec(1.0, 1.0, 2.0, 3.0, Variant::sp2), g, config);
    CHECK(sp2.converged);
    CHECK(sp2.action > 0.0);

    CHECK_THROWS_AS(minimize_nehari(ProblemSpec(1.0, 0.1, 2.0, 3.0, Variant::sp3), g, config),
                    UnsupportedVariantError);
    CHECK_THROWS_AS(minimize_nehari(ProblemSpec(1.0, 1.0, 2.0, 3.0, Variant::sp4), g, config),
                    TrivialityError);
    CHECK_THROWS_AS(petviashvili(ProblemSpec(1.0, 1.0, 2.0, 3.0, Variant::sp1), g, config),
                    UnsupportedVariantError);
    CHECK_THROWS_AS(minimize_pohozaev(ProblemSpec(1.0, 1.0, 2.0, 3.0, Variant::sp1), g, config),
                    UnsupportedVariantError);
}

TEST_CASE("constrained solve refuses speeds at or above the threshold") {
    const GridSpec g{100.0, 1024};
    SolverConfig config;
    // c0(2,3) = 2/9
    CHECK_THROWS_AS(minimize_pohozaev(ProblemSpec(1.0, 0.23, 2.0, 3.0, Variant::sp3), g, config),
                    ThresholdError);
    CHECK_THROWS_AS(minimize_pohozaev(ProblemSpec(1.0, 2.0 / 9.0, 2.0, 3.0, Variant::sp3), g, config),
                    ThresholdError);
}

TEST_CASE("focusing-defocusing ground state at sigma = 1") {
    const GridSpec g{1600.0, 16384};
    const ProblemSpec spec(1.0, 0.1, 2.0, 3.0, Variant::sp3);
    SolverConfig config;
    config.max_iter = 2000;
    config.grad_tol = 1e-6;

    const GroundStateReport rep = minimize_pohozaev(spec, g, config);
    REQUIRE(rep.converged);
    CHECK(rep.el_residual <= 1e-10);
    CHECK(rep.action == doctest::Approx(0.02150768472866793).epsilon(1e-8));
    REQUIRE(rep.multiplier.has_value());
    CHECK(*rep.multiplier == doctest::Approx(0.08328707260287221).epsilon(1e-6));
    REQUIRE(rep.j3_value.has_value());

    const Moments m = moments(spec, rep.profile);
    CHECK(std::abs(rep.pohozaev) <= 1e-5 * (m.kinetic + m.mass));
    CHECK(*rep.j3_value == doctest::Approx(0.5 * spec.sigma * m.kinetic).epsilon(1e-10));

    double min_v = rep.profile.values[0];
    for (double v : rep.profile.values) min_v = std::min(min_v, v);
    CHECK(min_v > -1e-8);  // ground state is positive up to truncation-level wiggle
}

TEST_CASE("focusing-defocusing ground state at sigma = 1/2") {
    const GridSpec g{65536.0, 32768};
    const ProblemSpec spec(0.5, 0.18, 2.0, 2.9, Variant::sp3);
    SolverConfig config;
    config.max_iter = 3000;
    config.grad_tol = 1e-7;

    const GroundStateReport rep = minimize_pohozaev(spec, g, config);
    REQUIRE(rep.converged);
    CHECK(rep.el_residual <= 1e-12);
    CHECK(rep.action == doctest::Approx(2.9056107418328594).epsilon(1e-8));
    REQUIRE(rep.multiplier.has_value());
    REQUIRE(rep.j3_value.has_value());
    CHECK(*rep.multiplier == doctest::Approx(0.5880596302728052).epsilon(1e-8));
    CHECK(*rep.j3_value == doctest::Approx(1.7045900993600533).epsilon(1e-8));

    // the readout reproduces the constrained quantities through the dilation laws
    const Moments m = moments(spec, rep.profile);
    const double level = pohozaev_p_from(spec, m);
    REQUIRE(level > 0.0);
    const double j_from_profile = 0.5 * spec.sigma * std::pow(level, spec.sigma - 1.0) * m.kinetic;
    CHECK(*rep.j3_value == doctest::Approx(j_from_profile).epsilon(1e-12));
    const double pairing = -spec.c * m.mass + m.pmom - m.qmom;
    const double mu_from_profile = std::pow(level, -spec.sigma) * pairing / m.kinetic;
    CHECK(*rep.multiplier == doctest::Approx(mu_from_profile).epsilon(1e-12));

    // multiplier identity: at sigma = 1/2, mu * ((1-sigma)/sigma) * j3 = 1 up to
    // the discretization error of this deliberately small box
    CHECK(std::abs(*rep.multiplier * *rep.j3_value - 1.0) <= 3e-3);
}

TEST_CASE("petviashvili diverges loudly on a hopeless configuration") {
    const GridSpec g{50.0, 512};
    const ProblemSpec spec(1.0, 1.0, 2.0, 3.0, Variant::single_power);
    SolverConfig config;
    config.max_iter = 3;
    config.grad_tol = 1e-12;  // unreachable in three steps
    CHECK_THROWS_AS(petviashvili(spec, g, config), ConvergenceError);
}
