#include <qcc/chernoff.hpp>

#include <cmath>
#include <limits>

namespace qcc {
namespace {

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
        throw validation_error("chernoff: epsilon must lie in (0,1)");
    }
}

// Root of an increasing function on [0, hi_seed-doubling], bisected until the
// bracket is narrower than 1e-13 relative.  f(0) < 0 is assumed.
template <typename F>
double bisect_increasing(F f, double hi_seed) {
    double lo = 0.0;
    double hi = hi_seed;
    while (f(hi) < 0.0) {
        hi *= 2.0;
        if (!std::isfinite(hi)) {
            return std::numeric_limits<double>::infinity();
        }
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ChernoffInterval chernoff_expectation_bounds(double chi, double epsilon) {
    check_epsilon(epsilon);
    if (chi < 0.0) {
        throw validation_error("chernoff: observed count must be >= 0");
    }
    const double b = -std::log(epsilon / 2.0);
    ChernoffInterval out;
    out.b = b;
    if (chi == 0.0) {
        out.low = 0.0;
        out.high = b;
        return out;
    }
    if (chi >= 6.0 * b) {
        // Large-count closed form.  The relative deviation loosens sharply as
        // chi approaches 6b from above (delta -> 1), which is the safe
        // direction for an upper bound.
        const double d =
            (3.0 * b + std::sqrt(8.0 * b * chi + b * b)) / (2.0 * (chi - b));
        out.low = chi / (1.0 + d);
        out.high = d < 1.0 ? chi / (1.0 - d)
                           : std::numeric_limits<double>::infinity();
        return out;
    }
    // Small-count regime: solve the defining equations exactly.
    // Lower: chi * (ln(1+d) - d/(1+d)) = b, d in (0, inf).
    if (chi * 700.0 < b) {
        // The solving deviation would overflow; the bound is indistinguishable
        // from zero.
        out.low = 0.0;
    } else {
        const double dl = bisect_increasing(
            [&](double d) { return chi * (std::log1p(d) - d / (1.0 + d)) - b; },
            1.0);
        out.low = std::isfinite(dl) ? chi / (1.0 + dl) : 0.0;
    }
    // Upper: chi * (d/(1-d) + ln(1-d)) = b, d in (0, 1).
    {
        double lo = 0.0;
        double hi = 1.0 - 1e-16;
        auto g = [&](double d) {
            return chi * (d / (1.0 - d) + std::log1p(-d)) - b;
        };
        for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
            double mid = 0.5 * (lo + hi);
            (g(mid) < 0.0 ? lo : hi) = mid;
        }
        const double du = 0.5 * (lo + hi);
        out.high = chi / (1.0 - du);
    }
    return out;
}

ChernoffInterval chernoff_observation_bounds(double mean, double epsilon) {
    check_epsilon(epsilon);
    if (mean < 0.0) {
        throw validation_error("chernoff: expected count must be >= 0");
    }
    const double b = -std::log(epsilon / 2.0);
    ChernoffInterval out;
    out.b = b;
    if (mean == 0.0) {
        out.degenerate = true;
        return out;  // [0, 0]
    }
    const double d = (b + std::sqrt(b * b + 8.0 * b * mean)) / (2.0 * mean);
    out.low = std::max(0.0, (1.0 - d) * mean);
    out.high = (1.0 + d) * mean;
    return out;
}

}  // namespace qcc
