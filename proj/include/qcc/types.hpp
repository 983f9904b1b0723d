#pragma once
// Shared domain types for the conferencing-key toolkit: source intensities,
// channel/detector model, pulse-shape model, analysis knobs, and the
// count ledger produced by experiments or simulation.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qcc {

// Thrown on malformed input files or violated field constraints.
// The CLI maps this to exit code 2.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when an analysis cannot proceed (infeasible bounds, empty interval).
// The CLI maps this to exit code 3.
class analysis_error : public std::runtime_error {
public:
    explicit analysis_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Four-intensity sending schedule: one signal intensity (Z basis) and three
// decoy intensities (X basis, one of them vacuum), with selection probabilities.
struct SourceSpec {
    double mu_z = 0.100;   // signal mean photon number (Z basis)
    double mu_x = 0.0281;  // weak decoy mean photon number (X basis)
    double mu_y = 0.152;   // strong decoy mean photon number (X basis)
    double mu_o = 0.0;     // vacuum decoy, fixed 0
    double p_z = 0.33, p_x = 0.51, p_y = 0.09, p_o = 0.07;

    void validate() const;
};

// End-to-end channel + detection model. Transmittances include detector
// efficiency; p_d is per detector per gate; visibility is the aggregate
// triple-interference visibility (0.25 when alignment is perfect).
struct SystemModel {
    double eta_a = 1.0, eta_b = 1.0, eta_c = 1.0;
    double p_d = 0.0;
    double e_d = 0.0;
    double visibility = 0.25;
    double f = 1.16;  // error-correction efficiency

    void validate() const;
};

// Gaussian pulse-shape model: common linewidth parameter, pairwise arrival-time
// offsets and pairwise angular-frequency detunings between the three senders.
struct PulseModel {
    double gamma = 1.0;  // linewidth parameter (1/time^2)
    double dt_ab = 0.0, dt_ac = 0.0, dt_bc = 0.0;
    double domega_ab = 0.0, domega_bc = 0.0, domega_ca = 0.0;

    void validate() const;
};

// Statistical-analysis knobs.
struct AnalysisConfig {
    double epsilon = 1e-10;   // failure probability per concentration bound
    int h_scan_points = 64;   // grid size for the nuisance-term scan
    int quadrature_points = 32;  // Gauss-Legendre nodes per phase dimension

    void validate() const;
};

// Source combinations tracked by the ledger. The two *_sym entries aggregate
// the three cyclic placements (one row, one pulse count, one coincidence count).
enum class Combo : int {
    zzz = 0, xxx, yyy, ooo,
    oxx_sym, xoo_sym,
    oyy, yoy, yyo,
    yoo, oyo, ooy,
    count_
};
inline constexpr int kComboCount = static_cast<int>(Combo::count_);

const char* combo_name(Combo c);
Combo combo_from_name(const std::string& name);  // throws validation_error

// Raw counts: pulses sent (float: published pulse counts exceed integer
// reporting precision), coincidences and error counts (exact integers).
struct CountLedger {
    std::array<double, kComboCount> pulses{};
    std::array<std::uint64_t, kComboCount> coincidences{};
    std::uint64_t e_zzz_ab = 0, e_zzz_ac = 0, e_zzz_bc = 0;
    std::uint64_t e_xxx = 0;
    std::uint64_t e_yyy = 0;

    double n(Combo c) const { return pulses[static_cast<int>(c)]; }
    std::uint64_t m(Combo c) const { return coincidences[static_cast<int>(c)]; }
    void set(Combo c, double n_pulses, std::uint64_t m_coinc) {
        pulses[static_cast<int>(c)] = n_pulses;
        coincidences[static_cast<int>(c)] = m_coinc;
    }
    void validate() const;
};

// Expected per-pulse success probability (gain) and error-weighted gain for
// each source combination; for zzz the three pairwise error gains are kept.
struct GainTable {
    std::array<double, kComboCount> gain{};
    std::array<bool, kComboCount> present{};
    double eq_xxx = 0.0;                       // error-weighted gain of xxx
    std::array<double, 3> eq_zzz_pairs{};      // ab, ac, bc error-weighted gains
    double eq_yyy = 0.0;

    double q(Combo c) const;
    void set_q(Combo c, double v) {
        gain[static_cast<int>(c)] = v;
        present[static_cast<int>(c)] = true;
    }
    bool has(Combo c) const { return present[static_cast<int>(c)]; }
};

// Intermediate single-photon estimates produced by the decoy analysis.
struct DecoyEstimate {
    double h_low = 0.0, h_high = 0.0;     // vacuum-part bounds
    double s_plus_low = 0.0;
    double s_minus_high = 0.0;
    double y111_exp_low = 0.0;            // expectation-value yield bound
    double e111_exp_high = 1.0;           // expectation-value error bound
    double y111_real_low = 0.0;           // real-value (observed-count) bounds
    double e111_real_high = 1.0;
};

// Final analysis output.
struct KeyRateReport {
    double rate_per_pulse = 0.0;
    double rate_per_second = 0.0;       // filled when a repetition rate is given
    double qber_z_ab = 0.0, qber_z_ac = 0.0, qber_z_bc = 0.0;
    double qber_x = 0.0;
    DecoyEstimate decoy;
    double h_argmin = 0.0;              // nuisance value minimizing the rate
    int bound_applications = 0;         // number of concentration-bound uses
    double failure_budget = 0.0;        // bound_applications * epsilon
    std::string note;                   // populated when the rate is zero
};

}  // namespace qcc
