#pragma once
// Decoy-state estimators over gain tables: the vacuum-adjacent correction
// term, the two bound-side combinations, single-photon yield and error
// bounds obtained by eliminating the multiphoton sectors, and the resulting
// conference key rates for the four-intensity protocol and the
// three-intensity baseline. All estimators are pure arithmetic over a
// GainTable; the table is produced either by the forward model (expected
// values) or from a measured ledger (plug-in frequencies) — the caller picks
// the mode explicitly by choosing which table to build.

#include "qcc/types.hpp"

namespace qcc {

// Plug-in gain table from a measured ledger: per-combination frequency M/N
// and error-gain frequencies E/N. Combinations with zero recorded pulses are
// marked absent; estimators that need them throw.
GainTable gains_from_ledger(const CountLedger& ledger);

// Correction term assembled from the one-active/two-vacuum aggregates and
// the all-vacuum gain; subtracts the events a vacuum component of the decoy
// pulses would have produced. Pooled aggregate rows store the member mean,
// hence the factor 3.
double h_term(const GainTable& gains, const SourceSpec& source);

// The two weighted gain combinations whose difference isolates the
// single-photon sector: s_plus collects the positively-signed terms,
// s_minus the negatively-signed ones.
double s_plus(const GainTable& gains, const SourceSpec& source);
double s_minus(const GainTable& gains, const SourceSpec& source);

// Lower bound on the yield of the one-photon-per-user sector, from bounds on
// the two combinations and the correction term. Clamped to [0, 1]. Throws if
// the source has mu_x >= mu_y (the elimination denominator changes sign).
double y111_lower(double s_plus_low, double s_minus_high, double h,
                  const SourceSpec& source);

// Upper bound on the bit error rate of that sector, given an upper bound on
// the x-combination error gain and the correction term. Half the correction
// term is subtracted because vacuum-driven detections land on either error
// side with equal probability. Clamped to [0, 1]; a vanished yield bound
// (y111_low == 0) returns the vacuous bound 1 rather than dividing.
double e111_upper(double exx_qxx_high, double h, double y111_low,
                  const SourceSpec& source);

// Conference key rate per pulse for the four-intensity protocol:
//   p_z^3 { mu_z^3 e^{-3 mu_z} y111 [1 - H(e111)] - q_z f max_pair H(qber) }
// clamped at zero. Error arguments are capped at 1/2 inside the entropies;
// out-of-range inputs are clamped rather than rejected.
double key_rate_four_intensity(double y111, double e111_pz, double q_z,
                               double qber_ab, double qber_ac, double qber_bc,
                               const SourceSpec& source,
                               const SystemModel& system);

// Expected measurement schedule for a four-intensity session: pulse counts
// from the selection probabilities, expected coincidences and error counts
// rounded to integers. Pooled rows aggregate their three members.
CountLedger expected_ledger(const GainTable& gains, const SourceSpec& source,
                            double n_pulses);

// --- Three-intensity baseline -------------------------------------------

// Session parameters: signal intensity mu (used for both the key basis and
// the bright test basis), decoy intensity nu (test basis only), selection
// probabilities for the two intensities, and the per-intensity key-basis
// fractions. Test-basis decoy data at intensity nu is kept; key-basis data
// at nu is discarded.
struct ThreeIntensitySource {
    double mu = 0.0;
    double nu = 0.0;
    double p_mu = 0.0;
    double p_nu = 0.0;
    double p_z_mu = 0.0;
    double p_z_nu = 0.0;

    void validate() const;  // throws validation_error
};

// Statistical envelope width (number of standard errors) used by the
// baseline's per-observable intervals. Calibrated so that the optimized
// baseline reproduces its published operating corners.
constexpr double kThreeIntensitySigma = 11.5;

// Gain table for a three-intensity session: the roles map onto the standard
// combination machinery with the decoy intensity in the x slot and the
// signal intensity in both the z and y slots.
GainTable three_intensity_gains(const ThreeIntensitySource& params,
                                const SystemModel& system,
                                const PulseModel& pulse,
                                int quadrature_points = 32);

// Expected measurement schedule for a three-intensity session.
CountLedger three_intensity_ledger(const GainTable& gains,
                                   const ThreeIntensitySource& params,
                                   double n_pulses);

// Key rate per pulse of the three-intensity baseline evaluated on a ledger
// (measured or synthesized). Uses per-observable Gaussian standard-error
// intervals of width n_sigma in place of the joint-constraint machinery;
// n_sigma = 0 degenerates to the plug-in (asymptotic) evaluation.
double key_rate_three_intensity(const CountLedger& ledger,
                                const ThreeIntensitySource& params,
                                const SystemModel& system,
                                double n_sigma = kThreeIntensitySigma);

}  // namespace qcc
