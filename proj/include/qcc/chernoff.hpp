#pragma once

#include <qcc/types.hpp>

namespace qcc {

// Two-sided concentration interval; each side fails with probability <= eps/2.
// `b` records -ln(eps/2), the exponent budget the interval was built from.
struct ChernoffInterval {
    double low = 0.0;
    double high = 0.0;
    double b = 0.0;
    // Set when the input forced a degenerate interval (expected count of zero
    // converts to the single point {0}).
    bool degenerate = false;
};

// Observed count -> interval for its expectation.  Uses the closed-form
// relative deviation when the count is large (chi >= 6b) and solves the
// defining transcendental equations by bisection below that, to 1e-12
// relative.  chi = 0 yields [0, b].
ChernoffInterval chernoff_expectation_bounds(double chi, double epsilon);

// Expected count -> interval for the realized observation.  mean = 0 yields
// the degenerate point interval [0, 0].
ChernoffInterval chernoff_observation_bounds(double mean, double epsilon);

}  // namespace qcc
