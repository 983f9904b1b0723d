#pragma once
// Expected-value forward model of the full optical chain: closed-form
// single-photon yields and error rates, coherent-pulse gain tables for every
// source combination, and the asymptotic key rate with perfectly known
// single-photon statistics. Serves as the analytic oracle for the
// Monte-Carlo simulator and the input generator for rate studies.

#include <utility>

#include "qcc/ghz.hpp"
#include "qcc/types.hpp"

namespace qcc {

// Yield of a three-single-photon event (one photon per user), as seen by the
// coincidence rule, for Z and X preparations. The two are equal; the pair is
// returned so callers can see both routes agree. Uses the symmetric
// transmittance eta = (eta_a*eta_b*eta_c)^(1/3).
std::pair<double, double> single_photon_yield(const SystemModel& system);

// Bit error rate of the three-single-photon events in the X basis (equal to
// the phase-error rate of the Z-basis signal events). Throws if the yield is
// exactly zero (eta = 0 and p_d = 0).
double single_photon_error(const SystemModel& system);

// Coincidence probability for per-user photon numbers (na, nb, nc) under
// Z-basis preparation, averaged over the 8 equiprobable bit settings, in the
// independent-particle picture (each photon independently transmitted with
// probability eta, then routed to one of its path's two detectors with
// probability 1/2). Used by the Poisson-decomposition consistency check.
double photon_number_yield_z(int na, int nb, int nc, double eta, double p_d);

// Gain and error-gain table over all twelve ledger combinations for
// phase-randomized coherent pulses: enumerates the 8 polarization settings
// of each combination's basis, forms the six detector mean photon numbers
// (vacuum slots contribute zero field), applies the dark-count click model,
// phase-averages by Gauss-Legendre quadrature, and classifies accepted
// patterns into pairwise Z errors / parity X errors with misalignment flip
// e_d on signal-driven events and coin-flip errors on dark-driven ones.
GainTable expected_gains(const SourceSpec& source, const SystemModel& system,
                         const PulseModel& pulse, int quadrature_points = 32);

// Asymptotic key rate per pulse with exact single-photon statistics:
//   p_z^3 * { mu_z^3 e^{-3 mu_z} Y111 [1 - H(e111)] - Q_z f max_pair H(E_pair) }
// clamped at zero.
double infinite_decoy_key_rate(const SourceSpec& source,
                               const SystemModel& system,
                               int quadrature_points = 32);

}  // namespace qcc
