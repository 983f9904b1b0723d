#pragma once
// Fixed-node Gauss-Legendre quadrature over [0, 2pi], used for the uniform
// phase averages. Nodes/weights are computed once per order and cached.

#include <vector>

namespace qcc {

struct PhaseGrid {
    std::vector<double> node;    // phase values in [0, 2pi]
    std::vector<double> weight;  // weights summing to 2pi
};

// Nodes and weights for n-point Gauss-Legendre on [0, 2pi]; n >= 2.
const PhaseGrid& phase_grid(int n);

}  // namespace qcc
