#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

// Data-parallel building blocks used by every module: pointwise maps and reductions
// over contiguous double arrays. Each operation has a serial reference implementation
// and an OpenMP implementation. Reductions accumulate per fixed-size chunk and combine
// the chunk partials in index order, so serial and OpenMP backends produce bitwise
// identical results at any thread count.
namespace fracground::kernels {

enum class Backend { serial, openmp };

// Process-wide backend selection (defaults to openmp when compiled with OpenMP).
void set_backend(Backend b);
Backend backend();
bool openmp_compiled();
int max_threads();

inline constexpr std::size_t chunk_size = 4096;

// --- pointwise maps (out may alias in) ---
void scale(double* x, std::size_t n, double a);
void scale(std::complex<double>* x, std::size_t n, double a);
// y += a*x
void axpy(double a, const double* x, double* y, std::size_t n);
// out = a*x + b*y
void lincomb(double a, const double* x, double b, const double* y, double* out, std::size_t n);
void lincomb(double a, const std::complex<double>* x, double b, const std::complex<double>* y,
             std::complex<double>* out, std::size_t n);
void multiply(const double* a, const double* b, double* out, std::size_t n);
// out = |in|^p
void abs_pow(const double* in, double* out, std::size_t n, double p);
// out = sign(in) * |in|^p
void signed_pow(const double* in, double* out, std::size_t n, double p);
// out = in^k by repeated multiplication (exact sign handling for integer powers)
void int_pow(const double* in, double* out, std::size_t n, long long k);
// c[i] *= sym[i] for a real symbol acting on complex coefficients
void apply_real_symbol(std::complex<double>* c, const double* sym, std::size_t n);

// --- reductions (deterministic chunked accumulation) ---
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double sum_sq(const double* x, std::size_t n);
double sum_abs_pow(const double* x, std::size_t n, double r);
double sum_int_pow(const double* x, std::size_t n, long long k);
// sum_i w[i] * |c[i]|^2
double weighted_coeff_energy(const std::complex<double>* c, const double* w, std::size_t n);
double max_abs(const double* x, std::size_t n);
double min_value(const double* x, std::size_t n);
double max_value(const double* x, std::size_t n);
bool all_finite(const double* x, std::size_t n);
// index of the largest |x[i]|, smallest index on ties (serial by definition)
std::size_t argmax_abs(const double* x, std::size_t n);

}  // namespace fracground::kernels
