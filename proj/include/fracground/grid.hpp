#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "fracground/errors.hpp"

namespace fracground {

// Uniform periodic grid on [-L, L) with N nodes, x_m = -L + m*h, h = 2L/N.
// N is even so that x = 0 sits exactly at node N/2.
struct GridSpec {
    double L = 0.0;
    int N = 0;

    GridSpec() = default;
    GridSpec(double L_, int N_) : L(L_), N(N_) { validate(); }

    void validate() const {
        if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("GridSpec: L must be positive and finite");
        if (N < 8 || N % 2 != 0) throw DomainError("GridSpec: N must be even and at least 8");
    }

    double h() const { return 2.0 * L / N; }
    double node(int m) const { return -L + m * h(); }
    int center() const { return N / 2; }
    // Fundamental wavenumber pi/L; mode k carries xi_k = k*pi/L.
    double xi1() const { return M_PI / L; }
    // |xi| for DFT bin i in standard order (bin N/2 is the Nyquist mode).
    double xi_abs(int i) const {
        int k = i <= N / 2 ? i : N - i;
        return k * xi1();
    }

    bool operator==(const GridSpec&) const = default;
};

// Real-valued grid function.
struct Field {
    GridSpec grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const GridSpec& g) : grid(g), values(static_cast<size_t>(g.N), 0.0) { grid.validate(); }
    Field(const GridSpec& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        grid.validate();
        if (values.size() != static_cast<size_t>(grid.N))
            throw GridMismatchError("Field: value count does not match grid");
    }

    template <class F>
    static Field sample(const GridSpec& g, F&& f) {
        Field u(g);
        for (int m = 0; m < g.N; ++m) u.values[static_cast<size_t>(m)] = f(g.node(m));
        return u;
    }

    int size() const { return grid.N; }
    double* data() { return values.data(); }
    const double* data() const { return values.data(); }
};

// Complex DFT coefficients of a field, standard FFT bin order:
// bin i holds mode k = i for i <= N/2 and k = i - N for i > N/2.
struct Spectrum {
    GridSpec grid;
    std::vector<std::complex<double>> coeff;

    Spectrum() = default;
    explicit Spectrum(const GridSpec& g) : grid(g), coeff(static_cast<size_t>(g.N), 0.0) { grid.validate(); }

    int size() const { return grid.N; }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b)) throw GridMismatchError(std::string(where) + ": operands live on different grids");
}

}  // namespace fracground
