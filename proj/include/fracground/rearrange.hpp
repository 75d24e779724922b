#pragma once

#include <utility>
#include <vector>

#include "fracground/grid.hpp"

namespace fracground {

// Discrete symmetric-decreasing rearrangement: takes |u|, sorts descending, and places
// values around the center node N/2 — largest at N/2, then alternately one node right,
// one node left (right first), so u*[N/2 + j] holds rank 2j-1 and u*[N/2 - j] rank 2j.
Field rearrangement(const Field& u);

// The placement rule on a raw value array (exposed for direct layout checks).
std::vector<double> rearrange_values(std::vector<double> v);

// (||D^{sigma/2} |u| ||_2, ||D^{sigma/2} u||_2): modulus never increases the
// fractional energy, up to quadrature tolerance.
std::pair<double, double> modulus_energy_check(const Field& u, double sigma);

struct DecayReport {
    bool holds = true;
    double max_violation = 0.0;  // max over nodes of u(x) - bound(x), clipped at 0
    double min_margin = 0.0;     // min over nodes of bound(x) - u(x)
    int worst_node = -1;
};

// Checks u(x_m) <= (2|x_m|)^{-1/r} ||u||_{L^r} at every node with x_m != 0.
// Requires u nonnegative, symmetric-decreasing about the center node (the layout
// rearrangement produces); anything else is a ShapeError.
DecayReport decay_bound_check(const Field& u, double r);

}  // namespace fracground
