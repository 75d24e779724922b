#include "fracground/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracground/kernels.hpp"
#include "fracground/spectral.hpp"

namespace fracground {

namespace {

// Node visit order for the arranged layout: center, center+1, center-1, center+2, ...
// For an even length the leftmost node (index 0) has no right partner and comes last.
std::vector<size_t> placement_order(size_t n) {
    std::vector<size_t> order;
    order.reserve(n);
    const size_t center = n / 2;
    order.push_back(center);
    for (size_t j = 1; order.size() < n; ++j) {
        if (center + j < n) order.push_back(center + j);
        if (order.size() < n && j <= center) order.push_back(center - j);
    }
    return order;
}

}  // namespace

std::vector<double> rearrange_values(std::vector<double> v) {
    for (double& x : v) x = std::abs(x);
    std::sort(v.begin(), v.end(), std::greater<double>());
    const auto order = placement_order(v.size());
    std::vector<double> out(v.size());
    for (size_t rank = 0; rank < v.size(); ++rank) out[order[rank]] = v[rank];
    return out;
}

Field rearrangement(const Field& u) {
    u.grid.validate();
    return Field(u.grid, rearrange_values(u.values));
}

std::pair<double, double> modulus_energy_check(const Field& u, double sigma) {
    Field mod(u.grid);
    for (size_t i = 0; i < u.values.size(); ++i) mod.values[i] = std::abs(u.values[i]);
    const double em = std::sqrt(kinetic_sq(mod, sigma));
    const double eu = std::sqrt(kinetic_sq(u, sigma));
    return {em, eu};
}

DecayReport decay_bound_check(const Field& u, double r) {
    if (!(r >= 1.0) || !std::isfinite(r)) throw DomainError("decay_bound_check: r must be >= 1");
    const size_t n = u.values.size();
    const double peak = kernels::max_abs(u.data(), n);
    if (!(peak > 0.0)) throw ShapeError("decay_bound_check: field is identically zero");

    // Structural preconditions: nonnegative values, non-increasing along the arranged
    // placement order. A small relative slack absorbs solver-level symmetry error.
    const double slack = 2e-8 * peak;
    if (kernels::min_value(u.data(), n) < -slack)
        throw ShapeError("decay_bound_check: field has negative values");
    const auto order = placement_order(n);
    for (size_t rank = 1; rank < n; ++rank) {
        if (u.values[order[rank]] > u.values[order[rank - 1]] + slack)
            throw ShapeError("decay_bound_check: field is not symmetric-decreasing about the center");
    }

    const double lr = lp_norm(u, r);
    DecayReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (size_t m = 0; m < n; ++m) {
        const double x = u.grid.node(static_cast<int>(m));
        if (x == 0.0) continue;
        const double bound = lr * std::pow(2.0 * std::abs(x), -1.0 / r);
        const double margin = bound - u.values[m];
        if (margin < rep.min_margin) {
            rep.min_margin = margin;
            if (margin < 0.0) rep.worst_node = static_cast<int>(m);
        }
        rep.max_violation = std::max(rep.max_violation, -margin);
    }
    rep.holds = rep.max_violation <= 0.0;
    return rep;
}

}  // namespace fracground
