#pragma once
// Closed-form model of the three-path GHZ analyzer: per-detector click
// probabilities in the weak-pulse limit, phase-averaged projection
// probabilities onto the two accepted outcome classes, and the X-basis
// error rate implied by interference visibility and arrival-time spread.
//
// Geometry: three input pulses (intensities mu, nu, kappa for users A, B, C)
// are pairwise combined on three paths -- path 1 mixes A and B, path 2 mixes
// B and C, path 3 mixes C and A. Each path ends in a half-wave plate at
// 22.5 degrees, a polarizing splitter, and two detectors (H and V port).

#include <utility>

#include "qcc/types.hpp"

namespace qcc {

// Internal phase offsets of the three analyzer paths.
struct AnalyzerPhase {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma3 = 0.0;
};

// First-order click probabilities for the six detectors.
struct ClickProbs {
    double d1h = 0.0, d1v = 0.0;
    double d2h = 0.0, d2v = 0.0;
    double d3h = 0.0, d3v = 0.0;
};

// Per-detector click probabilities to first order in the intensities, for
// fixed relative source phases (phi_ab, phi_bc, phi_ca). Interference
// contrast on each path is damped by the arrival-time and frequency
// mismatch of the contributing pair. Values are clamped to [0, 1] only when
// the excursion is below 1e-12; larger excursions indicate invalid inputs
// and throw.
ClickProbs click_probabilities(double mu, double nu, double kappa,
                               const PulseModel& pulse,
                               double phi_ab, double phi_bc, double phi_ca,
                               const AnalyzerPhase& phase);

// Probabilities of the even-parity and odd-parity threefold coincidence
// classes for equal input intensity mu, averaged over uniformly random
// relative source phases by Gauss-Legendre quadrature (quadrature_points
// nodes per dimension). Returns {p_plus, p_minus}; the sum equals mu^3 in
// the first-order model regardless of delays or analyzer phases.
std::pair<double, double> projection_probabilities(double mu,
                                                   const PulseModel& pulse,
                                                   const AnalyzerPhase& phase,
                                                   int quadrature_points = 32);

// X-basis error rate for interference visibility v (0 <= v <= 0.25):
//   1/2 * (1 - v * exp(-gamma/2 * (dt_ab^2 + dt_ac^2 + dt_bc^2))).
double qber_x(const PulseModel& pulse, double visibility);

// Effective (signed) visibility produced by analyzer phase offsets alone:
// cos(gamma1 + gamma2 + gamma3) / 4.
double visibility_from_phases(const AnalyzerPhase& phase);

// Pairwise interference damping factors exp(-gamma*dt^2/2 - domega^2/(8*gamma))
// for the three paths (AB, BC, CA). Shared with the gain model.
struct PathDamping {
    double ab = 1.0, bc = 1.0, ca = 1.0;
};
PathDamping path_damping(const PulseModel& pulse);

}  // namespace qcc
