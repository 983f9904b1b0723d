#pragma once
// Small numeric helpers shared across the analysis modules.

#include <cmath>

#include "qcc/types.hpp"

namespace qcc {

// Binary entropy H(p) = -p log2 p - (1-p) log2 (1-p), with endpoint limits.
// Arguments outside [0, 1] by at most 1e-12 are clamped; anything further
// out is a caller bug and throws.
inline double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) {
        if (p < -1e-12 || p > 1.0 + 1e-12)
            throw analysis_error("binary_entropy: argument outside [0, 1]");
        p = p < 0.0 ? 0.0 : 1.0;
    }
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace qcc
