#pragma once

#include <qcc/types.hpp>

#include <utility>

namespace qcc {

// Statistical-fluctuation analysis: the count ledger in, conservative bounds
// out.  Every Chernoff application is tallied into *bound_applications when a
// counter is supplied, so callers can report the total failure budget.

// Minimized lower bound on the signal-side combination S+ over the joint
// lower-bound constraint family (every subset of the five contributing
// observables, sizes 2..5) plus per-observable boxes.
double splus_min(const CountLedger& ledger, const SourceSpec& source,
                 double epsilon, int* bound_applications = nullptr);

// Maximized upper bound on the subtracted combination S- (four observables,
// subsets of sizes 2..4, plus boxes).
double sminus_max(const CountLedger& ledger, const SourceSpec& source,
                  double epsilon, int* bound_applications = nullptr);

// Two-sided range for the vacuum-adjacent correction term built from the
// pooled one-decoy / two-vacuum aggregates and the all-vacuum row.  The lower
// end is clamped at zero.
std::pair<double, double> h_range(const CountLedger& ledger,
                                  const SourceSpec& source, double epsilon,
                                  int* bound_applications = nullptr);

// Full ledger-to-key-rate pipeline: LP bounds, correction-term scan over a
// uniform grid, real-value conversion of the yield and error bounds, and the
// scan minimum of the resulting rate.  rate_per_second is left at zero (the
// CLI scales by repetition rate).
KeyRateReport finite_key_rate(const CountLedger& ledger,
                              const SourceSpec& source,
                              const SystemModel& system,
                              const AnalysisConfig& analysis);

}  // namespace qcc
