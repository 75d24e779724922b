#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fracground/errors.hpp"
#include "fracground/random_fields.hpp"
#include "fracground/spectral.hpp"

using namespace fracground;

namespace {

constexpr double pi = std::numbers::pi;

Field cosine_mode(const GridSpec& g, int k, double amplitude = 1.0) {
    const double xi = double(k) * g.xi1();
    return Field::sample(g, [&](double x) { return amplitude * std::cos(xi * x); });
}

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

}  // namespace

TEST_CASE("inverse undoes forward") {
    const GridSpec g{10.0, 256};
    const Field u = random_smooth_field(g, 5, 40);
    const Field back = inverse(forward(u));
    double scale = 0.0;
    for (double v : u.values) scale = std::max(scale, std::abs(v));
    CHECK(max_abs_diff(u, back) <= 1e-13 * scale);
}

TEST_CASE("cosine mode transforms to two symmetric bins") {
    const GridSpec g{5.0, 64};
    const std::size_t k = 3;
    const Spectrum c = forward(cosine_mode(g, int(k)));
    // nodes start at -L, so mode k picks up the phase cos(k xi1 (x+L)) = (-1)^k cos(k xi1 x)
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t j = 0; j < c.coeff.size(); ++j) {
        const double expected = (j == k || j == c.coeff.size() - k) ? sign * g.N / 2.0 : 0.0;
        CHECK(std::abs(c.coeff[j].real() - expected) <= 1e-10 * g.N);
        CHECK(std::abs(c.coeff[j].imag()) <= 1e-10 * g.N);
    }
}

TEST_CASE("fractional derivative of a cosine mode is exact") {
    const GridSpec g{8.0, 128};
    for (double sigma : {0.5, 1.0, 1.5, 2.0}) {
        for (int k : {1, 5, 20}) {
            const Field u = cosine_mode(g, k);
            const Field du = apply_symbol(u, sigma);
            const double factor = std::pow(double(k) * g.xi1(), sigma);
            for (std::size_t i = 0; i < u.values.size(); ++i)
                CHECK(du.values[i] == doctest::Approx(factor * u.values[i]).epsilon(1e-11).scale(factor));
        }
    }
}

TEST_CASE("symbol table caches per grid and exponent") {
    const GridSpec g{8.0, 128};
    auto t1 = symbol_table(g, 0.7);
    auto t2 = symbol_table(g, 0.7);
    CHECK(t1.get() == t2.get());
    CHECK((*t1)[0] == 0.0);
    CHECK((*t1)[std::size_t(g.N / 2)] == doctest::Approx(std::pow(pi * (g.N / 2) / g.L, 0.7)).epsilon(1e-14));
    auto t3 = symbol_table(g, 0.8);
    CHECK(t3.get() != t1.get());
}

TEST_CASE("resolvent inverts the shifted symbol") {
    const GridSpec g{12.0, 256};
    const double sigma = 1.3, nu = 0.7;
    const Field u = random_smooth_field(g, 9, 50);
    Field forward_op = apply_symbol(u, sigma);
    for (std::size_t i = 0; i < u.values.size(); ++i) forward_op.values[i] += nu * u.values[i];
    const Field back = resolvent(forward_op, sigma, nu);
    double scale = 0.0;
    for (double v : u.values) scale = std::max(scale, std::abs(v));
    CHECK(max_abs_diff(u, back) <= 1e-12 * scale);
}

TEST_CASE("resolvent of a constant divides by nu") {
    const GridSpec g{12.0, 64};
    Field ones(g);
    for (auto& v : ones.values) v = 1.0;
    const Field r = resolvent(ones, 0.8, 2.0);
    for (double v : r.values) CHECK(v == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("resolvent of a single cosine mode") {
    const GridSpec g{4.0, 64};
    const Field u = cosine_mode(g, 1);
    const Field r = resolvent(u, 1.0, 1.0);
    const double factor = 1.0 / (pi / g.L + 1.0);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        CHECK(r.values[i] == doctest::Approx(factor * u.values[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("symbol application is self-adjoint and a semigroup") {
    const GridSpec g{9.0, 256};
    const Field u = random_smooth_field(g, 21, 60);
    const Field v = random_smooth_field(g, 22, 60);
    const double sigma = 1.1;

    Field du = apply_symbol(u, sigma);
    Field dv = apply_symbol(v, sigma);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        lhs += du.values[i] * v.values[i];
        rhs += u.values[i] * dv.values[i];
    }
    lhs *= g.h();
    rhs *= g.h();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));

    const Field two_halves = apply_symbol(apply_symbol(u, sigma / 2), sigma / 2);
    double scale = 0.0;
    for (double w : du.values) scale = std::max(scale, std::abs(w));
    CHECK(max_abs_diff(two_halves, du) <= 1e-10 * scale);
}

TEST_CASE("symbol preserves evenness") {
    const GridSpec g{7.0, 128};
    Field u = random_smooth_field(g, 33, 30);
    for (std::size_t m = 1; m < u.values.size(); ++m) {
        const std::size_t mirror = u.values.size() - m;
        if (m < mirror) u.values[mirror] = u.values[m];
    }
    const Field du = apply_symbol(u, 0.9);
    for (std::size_t m = 1; m < du.values.size(); ++m) {
        const std::size_t mirror = du.values.size() - m;
        if (m < mirror) CHECK(du.values[m] == doctest::Approx(du.values[mirror]).epsilon(1e-11).scale(1.0));
    }
}

TEST_CASE("kernel integrates to 1/nu and is positive, even, decreasing") {
    const GridSpec g{40.0, 4096};
    for (double sigma : {0.5, 1.0, 1.5}) {
        for (double nu : {0.5, 1.0, 2.0}) {
            const Field k = kernel(sigma, nu, g);
            CHECK(quadrature(k) == doctest::Approx(1.0 / nu).epsilon(1e-12));

            const std::size_t center = std::size_t(g.center());
            const std::size_t n = k.values.size();
            // the outer stretch of the domain is wrap-dominated and excluded from shape checks
            const std::size_t margin = n / 20;
            double min_inner = k.values[center];
            for (std::size_t m = margin; m + margin < n; ++m) min_inner = std::min(min_inner, k.values[m]);
            CHECK(k.values[center] > 0.0);
            CHECK(min_inner > 0.0);

            for (std::size_t m = 1; m < n; ++m) {
                const std::size_t mirror = n - m;
                if (m < mirror)
                    CHECK(k.values[m] == doctest::Approx(k.values[mirror]).epsilon(1e-12).scale(k.values[center]));
            }

            // strict decrease is asserted on the inner 70%; beyond that the tail sits at the
            // truncation noise floor (~1e-8 of the peak) on this small box
            const std::size_t strict_margin = (3 * n) / 20;
            for (std::size_t m = center; m + 1 + strict_margin < n; ++m)
                CHECK(k.values[m + 1] <= k.values[m] * (1.0 + 1e-12));
            for (std::size_t m = center; m + 1 + margin < n; ++m)
                CHECK(k.values[m + 1] <= k.values[m] + 1e-7 * k.values[center]);
        }
    }
}

TEST_CASE("kernel obeys the nu-scaling law bin by bin") {
    const double sigma = 0.5, nu = 2.0;
    const double stretch = std::pow(nu, 1.0 / sigma);
    const GridSpec g1{30.0, 2048};
    const GridSpec g2{30.0 * stretch, 2048};
    const Field k_nu = kernel(sigma, nu, g1);
    const Field k_one = kernel(sigma, 1.0, g2);
    const double prefactor = std::pow(nu, 1.0 / sigma - 1.0);
    const double scale = k_nu.values[std::size_t(g1.center())];
    for (std::size_t m = 0; m < k_nu.values.size(); ++m)
        CHECK(k_nu.values[m] == doctest::Approx(prefactor * k_one.values[m]).epsilon(1e-11).scale(scale));
}

TEST_CASE("kernel rejects exponents outside (0,2)") {
    const GridSpec g{10.0, 64};
    CHECK_THROWS_AS(kernel(2.0, 1.0, g), DomainError);
    CHECK_THROWS_AS(kernel(0.0, 1.0, g), DomainError);
    CHECK_THROWS_AS(kernel(1.0, 0.0, g), DomainError);
    CHECK_THROWS_AS(kernel(1.0, -1.0, g), DomainError);
}

TEST_CASE("quadrature and norms on constants") {
    const GridSpec g{6.0, 64};
    Field u(g);
    for (auto& v : u.values) v = -1.5;
    CHECK(quadrature(u) == doctest::Approx(-1.5 * 2 * g.L).epsilon(1e-14));
    CHECK(l2_norm(u) == doctest::Approx(1.5 * std::sqrt(2 * g.L)).epsilon(1e-14));
    CHECK(lp_norm(u, 3.0) == doctest::Approx(1.5 * std::pow(2 * g.L, 1.0 / 3.0)).epsilon(1e-14));
    CHECK(kinetic_sq(u, 1.0) == doctest::Approx(0.0).scale(1.0));
    CHECK_THROWS_AS(lp_norm(u, 0.5), DomainError);
}

TEST_CASE("norms are Plancherel-consistent") {
    const GridSpec g{11.0, 512};
    const Field u = random_smooth_field(g, 55, 100);
    CHECK(spectral_l2_norm(forward(u)) == doctest::Approx(l2_norm(u)).epsilon(1e-12));
    const double sigma = 1.2, c = 0.7;
    const double h2 = hsc_norm(u, sigma, c);
    CHECK(h2 * h2 == doctest::Approx(kinetic_sq(u, sigma) + c * l2_norm(u) * l2_norm(u)).epsilon(1e-12));
}

TEST_CASE("kinetic energy of a cosine mode") {
    const GridSpec g{8.0, 256};
    const int k = 7;
    const Field u = cosine_mode(g, k);
    for (double sigma : {0.6, 1.0, 1.8}) {
        const double expected = std::pow(double(k) * g.xi1(), sigma) * g.L;
        CHECK(kinetic_sq(u, sigma) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("dilate evaluates the interpolant at stretched nodes") {
    const GridSpec g{10.0, 256};
    const int k = 4;
    const Field u = cosine_mode(g, k);

    const Field same = dilate(u, 1.0);
    CHECK(max_abs_diff(same, u) <= 1e-12);

    const double alpha = 1.7;
    const Field d = dilate(u, alpha);
    for (std::size_t m = 0; m < d.values.size(); ++m) {
        const double expected = std::cos(double(k) * g.xi1() * g.node(int(m)) / alpha);
        CHECK(d.values[m] == doctest::Approx(expected).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("dilating a narrow gaussian matches the analytic stretch") {
    const GridSpec g{20.0, 512};
    const Field u = Field::sample(g, [](double x) { return std::exp(-x * x); });
    const double alpha = 2.0;
    const Field d = dilate(u, alpha);
    for (std::size_t m = 0; m < d.values.size(); ++m) {
        const double x = g.node(int(m)) / alpha;
        CHECK(d.values[m] == doctest::Approx(std::exp(-x * x)).epsilon(1e-9).scale(1.0));
    }
    CHECK_THROWS_AS(dilate(u, 0.0), DomainError);
    CHECK_THROWS_AS(dilate(u, -2.0), DomainError);
}

TEST_CASE("circular shift permutes indices exactly") {
    const GridSpec g{5.0, 16};
    Field u(g);
    for (std::size_t m = 0; m < u.values.size(); ++m) u.values[m] = double(m);
    const Field s = circular_shift(u, 3);
    for (std::size_t m = 0; m < u.values.size(); ++m)
        CHECK(s.values[(m + 3) % u.values.size()] == u.values[m]);
    const Field round = circular_shift(s, -3);
    CHECK(round.values == u.values);
    const Field full = circular_shift(u, long(g.N));
    CHECK(full.values == u.values);
}

TEST_CASE("grid validation rejects bad shapes") {
    CHECK_THROWS_AS(GridSpec(10.0, 7), DomainError);
    CHECK_THROWS_AS(GridSpec(10.0, 4), DomainError);
    CHECK_THROWS_AS(GridSpec(0.0, 64), DomainError);
    CHECK_THROWS_AS(GridSpec(-3.0, 64), DomainError);
    const GridSpec g{10.0, 64};
    CHECK(g.h() == doctest::Approx(20.0 / 64).epsilon(1e-15));
    CHECK(g.node(g.center()) == 0.0);
    CHECK(g.node(0) == -10.0);
    CHECK(Field(g).values.size() == 64);
    CHECK_THROWS_AS(Field(g, std::vector<double>(63, 0.0)), GridMismatchError);
}
