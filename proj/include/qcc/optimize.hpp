#pragma once
// Derivative-free search over protocol parameters (intensities and selection
// probabilities) maximizing the finite-statistics conference key rate for a
// given channel and pulse budget. Multi-start downhill-simplex over smooth
// reparameterizations: intensities live on a log-scaled box, the decoy
// intensity is a strict fraction of its bright partner, and probabilities are
// softmax-mapped onto the simplex interior. The default operating point is
// always included as one start, so the search result never falls below the
// rate at those fixed parameters. Results are best-found, not certified
// global optima.

#include <qcc/decoy.hpp>
#include <qcc/types.hpp>

#include <cstdint>

namespace qcc {

// Box for the bright intensities (the key intensity and the brighter test
// intensity). The dimmer test intensity is parameterized as a strict fraction
// of the brighter one, which enforces mu_x < mu_y structurally.
struct OptimizerBounds {
    double mu_min = 1e-4;
    double mu_max = 1.0;

    void validate() const;  // throws validation_error
};

struct FourIntensityResult {
    SourceSpec source;            // best parameters found
    double rate = 0.0;            // finite-statistics rate at `source`
    std::uint64_t evaluations = 0;  // objective evaluations spent
    std::uint64_t seed = 0;       // seed the search ran with
};

struct ThreeIntensityResult {
    ThreeIntensitySource params;
    double rate = 0.0;
    std::uint64_t evaluations = 0;
    std::uint64_t seed = 0;
};

// Search the four-intensity protocol parameters (mu_z, mu_x, mu_y and the
// selection probabilities) for the channel `system` and a session of
// n_pulses. The objective is the full analysis pipeline: analytic gains ->
// expected session ledger -> concentration-bound key rate at failure budget
// parameter `epsilon`. `budget` caps the total objective evaluations across
// all starts. Deterministic for fixed (inputs, seed, budget), independent of
// n_workers. If no probe achieves a positive rate the result carries rate 0
// and the lexicographically smallest probed parameter set.
FourIntensityResult optimize_four_intensity(const SystemModel& system,
                                            double n_pulses, double epsilon,
                                            const OptimizerBounds& bounds = {},
                                            int budget = 2400,
                                            std::uint64_t seed = 1,
                                            int n_workers = 1);

// Same search for the three-intensity baseline over (mu, nu, p_mu, p_nu,
// p_z_mu, p_z_nu). The baseline's statistical envelope is its calibrated
// Gaussian width, so `epsilon` only labels the report; it does not change
// the envelope.
ThreeIntensityResult optimize_three_intensity(const SystemModel& system,
                                              double n_pulses, double epsilon,
                                              int budget = 2400,
                                              std::uint64_t seed = 1,
                                              int n_workers = 1);

}  // namespace qcc
