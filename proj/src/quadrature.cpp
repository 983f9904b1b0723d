#include "qcc/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace qcc {
namespace {

// Legendre polynomial P_n and its derivative at x, via the three-term
// recurrence. Returns {P_n(x), P_n'(x)}.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

PhaseGrid build_grid(int n) {
    const double pi = std::acos(-1.0);
    PhaseGrid g;
    g.node.resize(n);
    g.weight.resize(n);
    // Roots of P_n on (-1, 1), found by Newton from the Chebyshev guess.
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            auto [p, d] = legendre(n, x);
            dp = d;
            double step = p / d;
            x -= step;
            if (std::fabs(step) < 1e-15) break;
        }
        auto [p, d] = legendre(n, x);
        (void)p;
        dp = d;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map [-1, 1] -> [0, 2pi].
        g.node[i] = pi * (x + 1.0);
        g.weight[i] = pi * w;
    }
    return g;
}

}  // namespace

const PhaseGrid& phase_grid(int n) {
    if (n < 2) throw std::invalid_argument("phase_grid: order must be >= 2");
    static std::map<int, PhaseGrid> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_grid(n)).first;
    return it->second;
}

}  // namespace qcc
