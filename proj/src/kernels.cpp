#include "fracground/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fracground::kernels {

namespace {

std::atomic<Backend> g_backend{
#ifdef _OPENMP
    Backend::openmp
#else
    Backend::serial
#endif
};

std::size_t num_chunks(std::size_t n) { return (n + chunk_size - 1) / chunk_size; }

// Runs op(lo, hi) over consecutive [lo, hi) chunks; chunk-internal order is the same
// for both backends.
template <class ChunkOp>
void for_chunks(std::size_t n, ChunkOp&& op) {
    const auto nc = static_cast<std::ptrdiff_t>(num_chunks(n));
#ifdef _OPENMP
    if (g_backend.load(std::memory_order_relaxed) == Backend::openmp) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t c = 0; c < nc; ++c) {
            const std::size_t lo = static_cast<std::size_t>(c) * chunk_size;
            op(lo, std::min(lo + chunk_size, n));
        }
        return;
    }
#endif
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * chunk_size;
        op(lo, std::min(lo + chunk_size, n));
    }
}

// Chunked reduction: each chunk produces a partial in isolation, partials are combined
// serially in chunk order, so the result does not depend on the backend or thread count.
template <class T, class ChunkReduce, class Combine>
T reduce_chunks(std::size_t n, T init, ChunkReduce&& red, Combine&& comb) {
    const std::size_t nc = num_chunks(n);
    if (nc == 0) return init;
    std::vector<T> partials(nc);
    for_chunks(n, [&](std::size_t lo, std::size_t hi) { partials[lo / chunk_size] = red(lo, hi); });
    T acc = init;
    for (const T& p : partials) acc = comb(acc, p);
    return acc;
}

}  // namespace

void set_backend(Backend b) {
#ifndef _OPENMP
    b = Backend::serial;
#endif
    g_backend.store(b, std::memory_order_relaxed);
}

Backend backend() { return g_backend.load(std::memory_order_relaxed); }

bool openmp_compiled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void scale(double* x, std::size_t n, double a) {
    for_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) x[i] *= a;
    });
}

void scale(std::complex<double>* x, std::size_t n, double a) {
    for_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) x[i] *= a;
    });
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) y[i] += a * x[i];
    });
}

void lincomb(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
    for_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) out[i] = a * x[i] + b * y[i];
    });
}

void lincomb(double a, const std::complex<double>* x, double b, const std::complex<double>* y,
             std::complex<double>* out, std::size_t n) {
    for_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) out[i] = a * x[i] + b * y[i];
    });
}

void multiply(const double* a, const double* b, double* out, std::size_t n) {
    for_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) out[i] = a[i] * b[i];
    });
}

void abs_pow(const double* in, double* out, std::size_t n, double p) {
    for_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) out[i] = std::pow(std::abs(in[i]), p);
    });
}

void signed_pow(const double* in, double* out, std::size_t n, double p) {
    for_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double m = std::pow(std::abs(in[i]), p);
            out[i] = in[i] < 0.0 ? -m : m;
        }
    });
}

namespace {
double ipow_one(double s, long long k) {
    double r = 1.0;
    for (long long j = 0; j < k; ++j) r *= s;
    return r;
}
}  // namespace

void int_pow(const double* in, double* out, std::size_t n, long long k) {
    for_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) out[i] = ipow_one(in[i], k);
    });
}

void apply_real_symbol(std::complex<double>* c, const double* sym, std::size_t n) {
    for_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) c[i] *= sym[i];
    });
}

double sum(const double* x, std::size_t n) {
    return reduce_chunks(
        n, 0.0,
        [&](std::size_t lo, std::size_t hi) {
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += x[i];
            return s;
        },
        [](double a, double b) { return a + b; });
}

double dot(const double* x, const double* y, std::size_t n) {
    return reduce_chunks(
        n, 0.0,
        [&](std::size_t lo, std::size_t hi) {
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i];
            return s;
        },
        [](double a, double b) { return a + b; });
}

double sum_sq(const double* x, std::size_t n) { return dot(x, x, n); }

double sum_abs_pow(const double* x, std::size_t n, double r) {
    return reduce_chunks(
        n, 0.0,
        [&](std::size_t lo, std::size_t hi) {
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += std::pow(std::abs(x[i]), r);
            return s;
        },
        [](double a, double b) { return a + b; });
}

double sum_int_pow(const double* x, std::size_t n, long long k) {
    return reduce_chunks(
        n, 0.0,
        [&](std::size_t lo, std::size_t hi) {
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += ipow_one(x[i], k);
            return s;
        },
        [](double a, double b) { return a + b; });
}

double weighted_coeff_energy(const std::complex<double>* c, const double* w, std::size_t n) {
    return reduce_chunks(
        n, 0.0,
        [&](std::size_t lo, std::size_t hi) {
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += w[i] * std::norm(c[i]);
            return s;
        },
        [](double a, double b) { return a + b; });
}

double max_abs(const double* x, std::size_t n) {
    return reduce_chunks(
        n, 0.0,
        [&](std::size_t lo, std::size_t hi) {
            double m = 0.0;
            for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(x[i]));
            return m;
        },
        [](double a, double b) { return std::max(a, b); });
}

double min_value(const double* x, std::size_t n) {
    return reduce_chunks(
        n, std::numeric_limits<double>::infinity(),
        [&](std::size_t lo, std::size_t hi) {
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t i = lo; i < hi; ++i) m = std::min(m, x[i]);
            return m;
        },
        [](double a, double b) { return std::min(a, b); });
}

double max_value(const double* x, std::size_t n) {
    return reduce_chunks(
        n, -std::numeric_limits<double>::infinity(),
        [&](std::size_t lo, std::size_t hi) {
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t i = lo; i < hi; ++i) m = std::max(m, x[i]);
            return m;
        },
        [](double a, double b) { return std::max(a, b); });
}

bool all_finite(const double* x, std::size_t n) {
    return reduce_chunks(
        n, true,
        [&](std::size_t lo, std::size_t hi) {
            bool ok = true;
            for (std::size_t i = lo; i < hi; ++i) ok = ok && std::isfinite(x[i]);
            return ok;
        },
        [](bool a, bool b) { return a && b; });
}

std::size_t argmax_abs(const double* x, std::size_t n) {
    std::size_t best = 0;
    double bm = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = std::abs(x[i]);
        if (m > bm) {
            bm = m;
            best = i;
        }
    }
    return best;
}

}  // namespace fracground::kernels
