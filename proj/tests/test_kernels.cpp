#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "fracground/kernels.hpp"

using namespace fracground;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo = -2.0, double hi = 2.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

std::vector<std::complex<double>> random_complex_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<std::complex<double>> v(n);
    for (auto& z : v) z = {dist(rng), dist(rng)};
    return v;
}

// Sizes chosen around the reduction chunk boundary.
const std::vector<std::size_t> probe_sizes = {1, 7, 4095, 4096, 4097, 3 * 4096 + 17};

struct BackendGuard {
    kernels::Backend saved;
    BackendGuard() : saved(kernels::backend()) {}
    ~BackendGuard() { kernels::set_backend(saved); }
};

}  // namespace

TEST_CASE("backend selection round-trips") {
    BackendGuard guard;
    kernels::set_backend(kernels::Backend::serial);
    CHECK(kernels::backend() == kernels::Backend::serial);
    kernels::set_backend(kernels::Backend::openmp);
    CHECK(kernels::backend() == kernels::Backend::openmp);
    CHECK(kernels::max_threads() >= 1);
}

TEST_CASE("pointwise maps match hand-written loops") {
    for (std::size_t n : probe_sizes) {
        const std::vector<double> a = random_vector(n, 11 + n);
        const std::vector<double> b = random_vector(n, 23 + n);

        std::vector<double> out(n), expect(n);

        kernels::lincomb(2.5, a.data(), -1.25, b.data(), out.data(), n);
        for (std::size_t i = 0; i < n; ++i) expect[i] = 2.5 * a[i] - 1.25 * b[i];
        CHECK(out == expect);

        kernels::multiply(a.data(), b.data(), out.data(), n);
        for (std::size_t i = 0; i < n; ++i) expect[i] = a[i] * b[i];
        CHECK(out == expect);

        out = a;
        kernels::axpy(3.0, b.data(), out.data(), n);
        for (std::size_t i = 0; i < n; ++i) expect[i] = a[i] + 3.0 * b[i];
        CHECK(out == expect);

        out = a;
        kernels::scale(out.data(), n, -0.5);
        for (std::size_t i = 0; i < n; ++i) expect[i] = -0.5 * a[i];
        CHECK(out == expect);

        kernels::abs_pow(a.data(), out.data(), n, 1.7);
        for (std::size_t i = 0; i < n; ++i) expect[i] = std::pow(std::abs(a[i]), 1.7);
        CHECK(out == expect);

        kernels::signed_pow(a.data(), out.data(), n, 2.3);
        for (std::size_t i = 0; i < n; ++i)
            expect[i] = (a[i] < 0 ? -1.0 : 1.0) * std::pow(std::abs(a[i]), 2.3);
        CHECK(out == expect);
    }
}

TEST_CASE("integer powers are exact products with sign") {
    const std::vector<double> a = {-2.0, -0.5, 0.0, 0.5, 3.0};
    std::vector<double> out(a.size());

    kernels::int_pow(a.data(), out.data(), a.size(), 3);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(out[i] == a[i] * a[i] * a[i]);

    kernels::int_pow(a.data(), out.data(), a.size(), 2);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(out[i] == a[i] * a[i]);

    kernels::int_pow(a.data(), out.data(), a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(out[i] == 1.0);

    CHECK(kernels::sum_int_pow(a.data(), a.size(), 3) ==
          doctest::Approx(-8.0 - 0.125 + 0.0 + 0.125 + 27.0).epsilon(1e-15));
}

TEST_CASE("reductions match reference accumulation") {
    for (std::size_t n : probe_sizes) {
        const std::vector<double> a = random_vector(n, 31 + n);
        const std::vector<double> b = random_vector(n, 47 + n);

        long double s = 0, d = 0, sq = 0, sap = 0;
        double ma = 0;
        double mn = a[0], mx = a[0];
        for (std::size_t i = 0; i < n; ++i) {
            s += a[i];
            d += (long double)a[i] * b[i];
            sq += (long double)a[i] * a[i];
            sap += std::pow(std::abs((long double)a[i]), 2.5);
            ma = std::max(ma, std::abs(a[i]));
            mn = std::min(mn, a[i]);
            mx = std::max(mx, a[i]);
        }
        CHECK(kernels::sum(a.data(), n) == doctest::Approx((double)s).epsilon(1e-12));
        CHECK(kernels::dot(a.data(), b.data(), n) == doctest::Approx((double)d).epsilon(1e-12));
        CHECK(kernels::sum_sq(a.data(), n) == doctest::Approx((double)sq).epsilon(1e-12));
        CHECK(kernels::sum_abs_pow(a.data(), n, 2.5) == doctest::Approx((double)sap).epsilon(1e-12));
        CHECK(kernels::max_abs(a.data(), n) == ma);
        CHECK(kernels::min_value(a.data(), n) == mn);
        CHECK(kernels::max_value(a.data(), n) == mx);
    }
}

TEST_CASE("serial and OpenMP backends produce bitwise identical results") {
    BackendGuard guard;
    for (std::size_t n : probe_sizes) {
        const std::vector<double> a = random_vector(n, 101 + n);
        const std::vector<double> b = random_vector(n, 211 + n);
        const std::vector<std::complex<double>> c = random_complex_vector(n, 307 + n);
        const std::vector<double> w = random_vector(n, 401 + n, 0.0, 3.0);

        struct Snapshot {
            double sum, dot, sum_sq, sum_abs_pow, sum_int_pow, energy, max_abs, min_v, max_v;
            std::size_t arg;
            std::vector<double> lin, mul, ap, sp, ip;
            std::vector<std::complex<double>> sym;
        };
        auto run = [&]() {
            Snapshot snap;
            snap.sum = kernels::sum(a.data(), n);
            snap.dot = kernels::dot(a.data(), b.data(), n);
            snap.sum_sq = kernels::sum_sq(a.data(), n);
            snap.sum_abs_pow = kernels::sum_abs_pow(a.data(), n, 1.9);
            snap.sum_int_pow = kernels::sum_int_pow(a.data(), n, 4);
            snap.energy = kernels::weighted_coeff_energy(c.data(), w.data(), n);
            snap.max_abs = kernels::max_abs(a.data(), n);
            snap.min_v = kernels::min_value(a.data(), n);
            snap.max_v = kernels::max_value(a.data(), n);
            snap.arg = kernels::argmax_abs(a.data(), n);
            snap.lin.resize(n);
            kernels::lincomb(1.5, a.data(), 2.5, b.data(), snap.lin.data(), n);
            snap.mul.resize(n);
            kernels::multiply(a.data(), b.data(), snap.mul.data(), n);
            snap.ap.resize(n);
            kernels::abs_pow(a.data(), snap.ap.data(), n, 2.2);
            snap.sp.resize(n);
            kernels::signed_pow(a.data(), snap.sp.data(), n, 1.3);
            snap.ip.resize(n);
            kernels::int_pow(a.data(), snap.ip.data(), n, 3);
            snap.sym = c;
            kernels::apply_real_symbol(snap.sym.data(), w.data(), n);
            return snap;
        };

        kernels::set_backend(kernels::Backend::serial);
        const Snapshot s1 = run();
        kernels::set_backend(kernels::Backend::openmp);
        const Snapshot s2 = run();

        CHECK(s1.sum == s2.sum);
        CHECK(s1.dot == s2.dot);
        CHECK(s1.sum_sq == s2.sum_sq);
        CHECK(s1.sum_abs_pow == s2.sum_abs_pow);
        CHECK(s1.sum_int_pow == s2.sum_int_pow);
        CHECK(s1.energy == s2.energy);
        CHECK(s1.max_abs == s2.max_abs);
        CHECK(s1.min_v == s2.min_v);
        CHECK(s1.max_v == s2.max_v);
        CHECK(s1.arg == s2.arg);
        CHECK(s1.lin == s2.lin);
        CHECK(s1.mul == s2.mul);
        CHECK(s1.ap == s2.ap);
        CHECK(s1.sp == s2.sp);
        CHECK(s1.ip == s2.ip);
        CHECK(s1.sym == s2.sym);
    }
}

TEST_CASE("argmax_abs breaks ties at the smallest index") {
    const std::vector<double> v = {1.0, -3.0, 2.0, 3.0, -3.0};
    CHECK(kernels::argmax_abs(v.data(), v.size()) == 1);
    const std::vector<double> w = {0.0, 0.0, 0.0};
    CHECK(kernels::argmax_abs(w.data(), w.size()) == 0);
}

TEST_CASE("all_finite flags NaN and infinities") {
    std::vector<double> v = random_vector(4097, 77);
    CHECK(kernels::all_finite(v.data(), v.size()));
    v[4000] = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(kernels::all_finite(v.data(), v.size()));
    v[4000] = std::numeric_limits<double>::infinity();
    CHECK_FALSE(kernels::all_finite(v.data(), v.size()));
}

TEST_CASE("weighted coefficient energy matches the direct sum") {
    const std::size_t n = 4097;
    const auto c = random_complex_vector(n, 13);
    const auto w = random_vector(n, 17, 0.0, 5.0);
    long double ref = 0;
    for (std::size_t i = 0; i < n; ++i) ref += w[i] * std::norm((std::complex<long double>)c[i]);
    CHECK(kernels::weighted_coeff_energy(c.data(), w.data(), n) ==
          doctest::Approx((double)ref).epsilon(1e-12));
}

TEST_CASE("complex maps match hand loops") {
    const std::size_t n = 4099;
    auto c1 = random_complex_vector(n, 19);
    const auto c2 = random_complex_vector(n, 29);
    const auto w = random_vector(n, 37);

    std::vector<std::complex<double>> out(n), expect(n);
    kernels::lincomb(0.5, c1.data(), -2.0, c2.data(), out.data(), n);
    for (std::size_t i = 0; i < n; ++i) expect[i] = 0.5 * c1[i] - 2.0 * c2[i];
    CHECK(out == expect);

    expect = c1;
    for (std::size_t i = 0; i < n; ++i) expect[i] *= w[i];
    kernels::apply_real_symbol(c1.data(), w.data(), n);
    CHECK(c1 == expect);

    auto c3 = c2;
    kernels::scale(c3.data(), n, 1.75);
    for (std::size_t i = 0; i < n; ++i) CHECK(c3[i] == 1.75 * c2[i]);
}
