#include <qcc/finite_key.hpp>

#include <qcc/chernoff.hpp>
#include <qcc/lp.hpp>
#include <qcc/math.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace qcc {
namespace {

void bump(int* counter, int by) {
    if (counter != nullptr) *counter += by;
}

double pulses_or_throw(const CountLedger& ledger, Combo c, const char* who) {
    const double n = ledger.n(c);
    if (!(n > 0.0)) {
        throw analysis_error(std::string(who) + ": no pulses recorded for " +
                             combo_name(c));
    }
    return n;
}

// Shared skeleton of the two bound LPs over expectation-space variables
// x_i = <count_i>.  Every subset of size >= 2 contributes one joint
// constraint on the subset sum (lower bounds when minimizing, upper bounds
// when maximizing), and each variable is boxed by its own interval.  Returns
// the optimum of sum_i (weights_i / pulse_budget_i) * x_i.
double solve_joint_lp(const std::vector<double>& counts,
                      const std::vector<double>& pulse_budget,
                      const std::vector<double>& weights, bool maximize,
                      double epsilon, int* bound_applications,
                      const char* who) {
    const int k = static_cast<int>(counts.size());
    const double row_sign = maximize ? 1.0 : -1.0;
    LinearProgram lp;
    lp.objective.resize(k);
    for (int i = 0; i < k; ++i) {
        const double c = weights[i] / pulse_budget[i];
        lp.objective[i] = maximize ? -c : c;
    }
    for (int mask = 0; mask < (1 << k); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) < 2) continue;
        double pooled = 0.0;
        for (int i = 0; i < k; ++i) {
            if (mask & (1 << i)) pooled += counts[i];
        }
        const ChernoffInterval iv = chernoff_expectation_bounds(pooled, epsilon);
        bump(bound_applications, 1);
        std::vector<double> row(k, 0.0);
        for (int i = 0; i < k; ++i) {
            if (mask & (1 << i)) row[i] = row_sign;
        }
        lp.row_coeffs.push_back(std::move(row));
        lp.row_limits.push_back(maximize ? iv.high : -iv.low);
    }
    for (int i = 0; i < k; ++i) {
        const ChernoffInterval iv = chernoff_expectation_bounds(counts[i], epsilon);
        bump(bound_applications, 2);
        lp.lower.push_back(iv.low);
        lp.upper.push_back(iv.high);
    }
    const LpSolution sol = solve_lp(lp);
    if (!sol.feasible) {
        throw analysis_error(std::string(who) + ": constraint system " +
                             (sol.message.empty() ? "unsolvable" : sol.message) +
                             " (corrupted ledger?)");
    }
    return maximize ? -sol.objective : sol.objective;
}

}  // namespace

double splus_min(const CountLedger& ledger, const SourceSpec& source,
                 double epsilon, int* bound_applications) {
    source.validate();
    const Combo members[5] = {Combo::xxx, Combo::oyy, Combo::yoy, Combo::yyo,
                              Combo::ooo};
    std::vector<double> counts, budget;
    for (Combo c : members) {
        counts.push_back(static_cast<double>(ledger.m(c)));
        budget.push_back(pulses_or_throw(ledger, c, "splus_min"));
    }
    const double wx = std::exp(-3.0 * source.mu_x) * std::pow(source.mu_x, 4);
    const std::vector<double> weights = {
        std::exp(-3.0 * source.mu_y) * std::pow(source.mu_y, 4),
        wx * std::exp(-source.mu_y), wx * std::exp(-source.mu_y),
        wx * std::exp(-source.mu_y), wx * std::exp(-3.0 * source.mu_y)};
    return solve_joint_lp(counts, budget, weights, /*maximize=*/false, epsilon,
                          bound_applications, "splus_min");
}

double sminus_max(const CountLedger& ledger, const SourceSpec& source,
                  double epsilon, int* bound_applications) {
    source.validate();
    const Combo members[4] = {Combo::yyy, Combo::yoo, Combo::oyo, Combo::ooy};
    std::vector<double> counts, budget;
    for (Combo c : members) {
        counts.push_back(static_cast<double>(ledger.m(c)));
        budget.push_back(pulses_or_throw(ledger, c, "sminus_max"));
    }
    const double wy = std::exp(-3.0 * source.mu_x) * std::pow(source.mu_x, 4);
    const std::vector<double> weights = {wy, wy * std::exp(-2.0 * source.mu_y),
                                         wy * std::exp(-2.0 * source.mu_y),
                                         wy * std::exp(-2.0 * source.mu_y)};
    return solve_joint_lp(counts, budget, weights, /*maximize=*/true, epsilon,
                          bound_applications, "sminus_max");
}

std::pair<double, double> h_range(const CountLedger& ledger,
                                  const SourceSpec& source, double epsilon,
                                  int* bound_applications) {
    source.validate();
    const double n_oxx =
        pulses_or_throw(ledger, Combo::oxx_sym, "h_range") / 3.0;
    const double n_xoo =
        pulses_or_throw(ledger, Combo::xoo_sym, "h_range") / 3.0;
    const double n_ooo = pulses_or_throw(ledger, Combo::ooo, "h_range");
    const ChernoffInterval oxx = chernoff_expectation_bounds(
        static_cast<double>(ledger.m(Combo::oxx_sym)), epsilon);
    const ChernoffInterval xoo = chernoff_expectation_bounds(
        static_cast<double>(ledger.m(Combo::xoo_sym)), epsilon);
    const ChernoffInterval ooo = chernoff_expectation_bounds(
        static_cast<double>(ledger.m(Combo::ooo)), epsilon);
    bump(bound_applications, 6);
    const double ax = std::exp(-source.mu_x);
    double low = ax * oxx.low / n_oxx - ax * ax * xoo.high / n_xoo +
                 ax * ax * ax * ooo.low / n_ooo;
    double high = ax * oxx.high / n_oxx - ax * ax * xoo.low / n_xoo +
                  ax * ax * ax * ooo.high / n_ooo;
    low = std::max(low, 0.0);
    return {low, high};
}

KeyRateReport finite_key_rate(const CountLedger& ledger,
                              const SourceSpec& source,
                              const SystemModel& system,
                              const AnalysisConfig& analysis) {
    source.validate();
    system.validate();
    analysis.validate();
    ledger.validate();
    const double epsilon = analysis.epsilon;

    KeyRateReport report;
    int napps = 0;
    report.decoy.s_plus_low = splus_min(ledger, source, epsilon, &napps);
    report.decoy.s_minus_high = sminus_max(ledger, source, epsilon, &napps);
    const auto [h_low, h_high] = h_range(ledger, source, epsilon, &napps);
    report.decoy.h_low = h_low;
    report.decoy.h_high = h_high;
    if (h_high < h_low) {
        throw analysis_error("finite_key_rate: empty correction-term interval");
    }

    const double n_xxx = pulses_or_throw(ledger, Combo::xxx, "finite_key_rate");
    const double exqx_high =
        chernoff_expectation_bounds(static_cast<double>(ledger.e_xxx), epsilon)
            .high /
        n_xxx;
    napps += 1;

    const double n_zzz = pulses_or_throw(ledger, Combo::zzz, "finite_key_rate");
    const double m_zzz = static_cast<double>(ledger.m(Combo::zzz));
    report.qber_x = ledger.m(Combo::xxx) > 0
                        ? static_cast<double>(ledger.e_xxx) /
                              static_cast<double>(ledger.m(Combo::xxx))
                        : 0.0;
    if (m_zzz <= 0.0) {
        report.bound_applications = napps;
        report.failure_budget = napps * epsilon;
        report.note = "no signal-basis coincidences recorded";
        return report;
    }
    report.qber_z_ab = static_cast<double>(ledger.e_zzz_ab) / m_zzz;
    report.qber_z_ac = static_cast<double>(ledger.e_zzz_ac) / m_zzz;
    report.qber_z_bc = static_cast<double>(ledger.e_zzz_bc) / m_zzz;
    const double q_z = m_zzz / n_zzz;
    const double leak =
        q_z * system.f *
        std::max({binary_entropy(report.qber_z_ab),
                  binary_entropy(report.qber_z_ac),
                  binary_entropy(report.qber_z_bc)});

    const double mu_x = source.mu_x, mu_y = source.mu_y, mu_z = source.mu_z;
    const double denom = std::exp(-3.0 * mu_x - 3.0 * mu_y) *
                         (std::pow(mu_x, 3) * std::pow(mu_y, 4) -
                          std::pow(mu_x, 4) * std::pow(mu_y, 3));
    const double w_xxx = std::exp(-3.0 * mu_y) * std::pow(mu_y, 4);
    const double K = n_zzz * std::pow(mu_z, 3) * std::exp(-3.0 * mu_z);

    const int points = std::max(analysis.h_scan_points, 1);
    bool have_best = false;
    bool any_yield = false;
    double best_rate = 0.0;
    for (int i = 0; i < points; ++i) {
        const double h =
            points == 1
                ? h_low
                : h_low + (h_high - h_low) * static_cast<double>(i) /
                              static_cast<double>(points - 1);
        double y_exp = (report.decoy.s_plus_low - report.decoy.s_minus_high -
                        w_xxx * h) /
                       denom;
        double e_exp = 1.0;
        double y_real = 0.0;
        double e_real = 1.0;
        double rate = 0.0;
        if (y_exp > 0.0) {
            y_exp = std::min(y_exp, 1.0);
            e_exp = std::clamp(
                (exqx_high - 0.5 * h) /
                    (std::pow(mu_x, 3) * std::exp(-3.0 * mu_x) * y_exp),
                0.0, 1.0);
            y_real = chernoff_observation_bounds(K * y_exp, epsilon).low / K;
            if (y_real > 0.0) {
                any_yield = true;
                e_real = std::min(
                    chernoff_observation_bounds(K * y_real * e_exp, epsilon)
                            .high /
                        (K * y_real),
                    1.0);
                rate = std::pow(source.p_z, 3) *
                       (std::pow(mu_z, 3) * std::exp(-3.0 * mu_z) * y_real *
                            (1.0 - binary_entropy(std::min(e_real, 0.5))) -
                        leak);
                rate = std::max(rate, 0.0);
            }
        } else {
            y_exp = 0.0;
        }
        if (!have_best || rate < best_rate) {
            have_best = true;
            best_rate = rate;
            report.h_argmin = h;
            report.decoy.y111_exp_low = y_exp;
            report.decoy.e111_exp_high = e_exp;
            report.decoy.y111_real_low = y_real;
            report.decoy.e111_real_high = e_real;
        }
    }
    napps += 2 * points;

    report.rate_per_pulse = best_rate;
    report.bound_applications = napps;
    report.failure_budget = napps * epsilon;
    if (best_rate == 0.0) {
        report.note = any_yield
                          ? "entropy leakage exceeds the single-photon term"
                          : "single-photon yield bound vanished on the scan";
    }
    return report;
}

}  // namespace qcc
