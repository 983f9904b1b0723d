#pragma once
// Event-level Monte-Carlo simulator: draws per-pulse source roles, basis
// states and relative phases, samples the six detectors from the same click
// model as the expected-gain calculation, and accumulates a count ledger.
// Serves as an independent check of the analytic channel model and as an
// input generator for the finite-statistics pipeline.

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "qcc/types.hpp"

namespace qcc {

// Pulse-budget plan. Proportional mode draws every user's role independently
// from the source selection probabilities each pulse; fixed mode spends an
// explicit pulse budget on each ledger combination, replicating biased
// schedules whose row totals are not proportional to probability products.
enum class QuotaMode { proportional, fixed };

struct SimPlan {
    std::uint64_t n_pulses = 0;  // total pulse triples (proportional mode)
    std::uint64_t seed = 0;
    QuotaMode mode = QuotaMode::proportional;
    // Per-combination pulse budgets, indexed by Combo (fixed mode only).
    std::array<std::uint64_t, kComboCount> budget{};

    void validate() const;
};

// Simulate the planned pulse triples through the analyzer and return the
// resulting ledger (pulses, coincidences, and error counts per combination).
// Deterministic given (inputs, seed): the workload is split into fixed-size
// blocks, each block derives an independent random stream from (seed, block
// index), and block results merge by summation, so the outcome does not
// depend on n_workers or on thread scheduling.
CountLedger simulate_counts(const SourceSpec& source, const SystemModel& system,
                            const SimPlan& plan,
                            const PulseModel& pulse = PulseModel{},
                            int n_workers = 1);

// One row of an interference scan over the arrival-time offsets of senders
// B and C relative to A (time in units of 1/sqrt(gamma), gamma = 1).
struct HomScanPoint {
    double dt_b = 0.0, dt_c = 0.0;
    std::uint64_t coincidences = 0, errors = 0;
    bool has_qber = false;  // false when the point saw no coincidence
    double qber_x = 0.0;    // errors / coincidences, only when has_qber
};

// X-basis interference scan: every pulse is an xxx triple of intensity mu;
// each grid point simulates n_per_point pulses at arrival offsets
// (dt_b, dt_c) and reports the error fraction among triple coincidences.
std::vector<HomScanPoint> simulate_hom_scan(
    double mu, const SystemModel& system,
    const std::vector<std::pair<double, double>>& grid,
    std::uint64_t n_per_point, std::uint64_t seed, int n_workers = 1);

}  // namespace qcc
