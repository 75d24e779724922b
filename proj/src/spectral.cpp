#include "fracground/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

#include "fracground/kernels.hpp"

namespace fracground {

namespace {

// FFTW planning is not thread-safe; executing a plan on fresh buffers is. Plans are
// created once per transform length under a lock (FFTW_ESTIMATE keeps planning
// deterministic) and executed on caller buffers via the new-array interface.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex g_plan_mutex;

PlanPair plans_for(int n) {
    static std::map<int, PlanPair>* cache = new std::map<int, PlanPair>();
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto it = cache->find(n);
    if (it != cache->end()) return it->second;
    std::vector<std::complex<double>> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
    auto* ap = reinterpret_cast<fftw_complex*>(a.data());
    auto* bp = reinterpret_cast<fftw_complex*>(b.data());
    PlanPair p;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p.fwd = fftw_plan_dft_1d(n, ap, bp, FFTW_FORWARD, flags);
    p.bwd = fftw_plan_dft_1d(n, ap, bp, FFTW_BACKWARD, flags);
    cache->emplace(n, p);
    return p;
}

void run_fft(int n, std::complex<double>* in, std::complex<double>* out, int sign) {
    PlanPair p = plans_for(n);
    fftw_execute_dft(sign == FFTW_FORWARD ? p.fwd : p.bwd, reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
}

struct SymbolKey {
    int N;
    std::uint64_t L_bits;
    std::uint64_t sigma_bits;
    auto operator<=>(const SymbolKey&) const = default;
};

void check_sigma(double sigma, bool allow_two, const char* where) {
    const bool ok = std::isfinite(sigma) && sigma > 0.0 && (allow_two ? sigma <= 2.0 : sigma < 2.0);
    if (!ok)
        throw DomainError(std::string(where) + ": sigma must lie in (0, 2" + (allow_two ? "]" : ")"));
}

}  // namespace

std::shared_ptr<const std::vector<double>> symbol_table(const GridSpec& g, double sigma) {
    g.validate();
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("symbol_table: sigma must be positive");
    static std::map<SymbolKey, std::shared_ptr<const std::vector<double>>>* cache =
        new std::map<SymbolKey, std::shared_ptr<const std::vector<double>>>();
    static std::mutex mu;
    const SymbolKey key{g.N, std::bit_cast<std::uint64_t>(g.L), std::bit_cast<std::uint64_t>(sigma)};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache->find(key);
        if (it != cache->end()) return it->second;
    }
    auto table = std::make_shared<std::vector<double>>(static_cast<size_t>(g.N));
    auto& t = *table;
    t[0] = 0.0;
    for (int i = 1; i < g.N; ++i) t[static_cast<size_t>(i)] = std::pow(g.xi_abs(i), sigma);
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache->emplace(key, std::move(table));
    return it->second;
}

Spectrum forward(const Field& u) {
    u.grid.validate();
    Spectrum c(u.grid);
    std::vector<std::complex<double>> in(static_cast<size_t>(u.grid.N));
    for (int m = 0; m < u.grid.N; ++m) in[static_cast<size_t>(m)] = u.values[static_cast<size_t>(m)];
    run_fft(u.grid.N, in.data(), c.coeff.data(), FFTW_FORWARD);
    return c;
}

Field inverse(const Spectrum& c) {
    c.grid.validate();
    std::vector<std::complex<double>> buf(c.coeff);
    std::vector<std::complex<double>> out(static_cast<size_t>(c.grid.N));
    run_fft(c.grid.N, buf.data(), out.data(), FFTW_BACKWARD);
    Field u(c.grid);
    const double inv_n = 1.0 / c.grid.N;
    for (int m = 0; m < c.grid.N; ++m) u.values[static_cast<size_t>(m)] = out[static_cast<size_t>(m)].real() * inv_n;
    return u;
}

void apply_symbol_inplace(Spectrum& c, double sigma) {
    check_sigma(sigma, /*allow_two=*/true, "apply_symbol");
    auto table = symbol_table(c.grid, sigma);
    kernels::apply_real_symbol(c.coeff.data(), table->data(), c.coeff.size());
}

Field apply_symbol(const Field& u, double sigma) {
    Spectrum c = forward(u);
    apply_symbol_inplace(c, sigma);
    return inverse(c);
}

void resolvent_inplace(Spectrum& c, double sigma, double nu) {
    check_sigma(sigma, /*allow_two=*/true, "resolvent");
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("resolvent: nu must be positive");
    auto table = symbol_table(c.grid, sigma);
    const auto& t = *table;
    std::vector<double> weights(t.size());
    for (size_t i = 0; i < t.size(); ++i) weights[i] = 1.0 / (t[i] + nu);
    kernels::apply_real_symbol(c.coeff.data(), weights.data(), c.coeff.size());
}

Field resolvent(const Field& u, double sigma, double nu) {
    Spectrum c = forward(u);
    resolvent_inplace(c, sigma, nu);
    return inverse(c);
}

Field kernel(double sigma, double nu, const GridSpec& grid) {
    check_sigma(sigma, /*allow_two=*/false, "kernel");
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("kernel: nu must be positive");
    grid.validate();
    Field delta(grid);
    delta.values[static_cast<size_t>(grid.center())] = 1.0 / grid.h();
    return resolvent(delta, sigma, nu);
}

double quadrature(const Field& u) { return u.grid.h() * kernels::sum(u.data(), u.values.size()); }

double lp_norm(const Field& u, double r) {
    if (!(r >= 1.0) || !std::isfinite(r)) throw DomainError("lp_norm: r must be >= 1");
    const double s = kernels::sum_abs_pow(u.data(), u.values.size(), r);
    return std::pow(u.grid.h() * s, 1.0 / r);
}

double l2_norm(const Field& u) { return std::sqrt(u.grid.h() * kernels::sum_sq(u.data(), u.values.size())); }

double kinetic_sq(const Spectrum& c, double sigma) {
    check_sigma(sigma, /*allow_two=*/true, "kinetic_sq");
    auto table = symbol_table(c.grid, sigma);
    const double e = kernels::weighted_coeff_energy(c.coeff.data(), table->data(), c.coeff.size());
    return e * c.grid.h() / c.grid.N;
}

double kinetic_sq(const Field& u, double sigma) { return kinetic_sq(forward(u), sigma); }

double hsc_norm(const Field& u, double sigma, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("hsc_norm: c must be positive");
    Spectrum hat = forward(u);
    const double kin = kinetic_sq(hat, sigma);
    const double mass = u.grid.h() * kernels::sum_sq(u.data(), u.values.size());
    return std::sqrt(kin + c * mass);
}

double spectral_l2_norm(const Spectrum& c) {
    // |c_k|^2 summed as squares of the interleaved real/imag doubles.
    const auto* d = reinterpret_cast<const double*>(c.coeff.data());
    const double s = kernels::sum_sq(d, 2 * c.coeff.size());
    return std::sqrt(s * c.grid.h() / c.grid.N);
}

namespace {
int next_pow2_at_least(int n) {
    int m = 1;
    while (m < n) m *= 2;
    return m;
}
}  // namespace

Field dilate(const Field& u, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("dilate: alpha must be positive");
    u.grid.validate();
    if (alpha == 1.0) return u;
    const int n = u.grid.N;
    const int half = n / 2;
    const int k_max = half - 1;

    Spectrum c = forward(u);

    // Evaluate the trig interpolant at fractional node positions s_m = s0 + m*d,
    // where s = (x + L)/h and the targets are x_m / alpha.
    const double d = 1.0 / alpha;
    const double s0 = half * (1.0 - d);
    const double theta = 2.0 * M_PI * d / n;  // phase increment e^{i theta k m}
    const double phi0 = 2.0 * M_PI * s0 / n;

    // Bluestein: e^{i theta k m} = e^{i theta (k^2 + m^2)/2} e^{-i theta (m-k)^2 / 2},
    // turning the fractional DFT into one linear convolution of length < 3n.
    const int m_fft = next_pow2_at_least(3 * n);
    std::vector<std::complex<double>> a(static_cast<size_t>(m_fft), 0.0);
    std::vector<std::complex<double>> g(static_cast<size_t>(m_fft), 0.0);
    for (int k = -k_max; k <= k_max; ++k) {
        const double ph = phi0 * k + 0.5 * theta * static_cast<double>(k) * k;
        const std::complex<double> ck = c.coeff[static_cast<size_t>((k + n) % n)];
        a[static_cast<size_t>((k + m_fft) % m_fft)] = ck * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    for (int j = -k_max; j <= n - 1 + k_max; ++j) {
        const double ph = -0.5 * theta * static_cast<double>(j) * j;
        g[static_cast<size_t>((j + m_fft) % m_fft)] = std::complex<double>(std::cos(ph), std::sin(ph));
    }

    std::vector<std::complex<double>> fa(static_cast<size_t>(m_fft)), fg(static_cast<size_t>(m_fft));
    run_fft(m_fft, a.data(), fa.data(), FFTW_FORWARD);
    run_fft(m_fft, g.data(), fg.data(), FFTW_FORWARD);
    for (int i = 0; i < m_fft; ++i) fa[static_cast<size_t>(i)] *= fg[static_cast<size_t>(i)];
    run_fft(m_fft, fa.data(), a.data(), FFTW_BACKWARD);

    const double nyq = c.coeff[static_cast<size_t>(half)].real();
    Field out(u.grid);
    const double inv_scale = 1.0 / (static_cast<double>(n) * m_fft);
    for (int m = 0; m < n; ++m) {
        const double ph = 0.5 * theta * static_cast<double>(m) * m;
        const std::complex<double> bm =
            a[static_cast<size_t>(m)] * std::complex<double>(std::cos(ph), std::sin(ph));
        const double s = s0 + m * d;
        out.values[static_cast<size_t>(m)] = bm.real() * inv_scale + nyq * std::cos(M_PI * s) / n;
    }
    return out;
}

Field circular_shift(const Field& u, long k) {
    const long n = u.grid.N;
    long s = k % n;
    if (s < 0) s += n;
    Field out(u.grid);
    for (long m = 0; m < n; ++m)
        out.values[static_cast<size_t>((m + s) % n)] = u.values[static_cast<size_t>(m)];
    return out;
}

}  // namespace fracground
