// Statistical pipeline checks: concentration bounds in both directions, the
// joint-constraint LP bounds, the correction-term range, and the full
// ledger-to-rate analysis on the three measured attenuation ledgers.
#include <qcc/chernoff.hpp>
#include <qcc/csv.hpp>
#include <qcc/finite_key.hpp>
#include <qcc/forward.hpp>
#include <qcc/lp.hpp>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "test_util.hpp"

using namespace qcc;

namespace {

std::string data_path(const std::string& name) {
    return std::string(QCC_TEST_DATA_DIR) + "/" + name;
}

CountLedger load_ledger(const std::string& tag) {
    CountLedger led = load_counts(data_path("counts_" + tag + "db.csv"));
    apply_errors(led, data_path("errors_" + tag + "db.csv"));
    led.validate();
    return led;
}

void check_expectation_bounds() {
    section("count -> expectation bounds");
    const double eps = 1e-10;
    const double b = 23.7189981105004;

    ChernoffInterval z = chernoff_expectation_bounds(0.0, eps);
    REQUIRE_CLOSE_REL(z.b, b, 1e-12, "exponent budget -ln(eps/2)");
    REQUIRE(z.low == 0.0, "zero count pins the lower end at zero");
    REQUIRE_CLOSE_REL(z.high, b, 1e-12, "zero count upper end equals b");

    struct Row {
        double chi, low, high;
    };
    // Reference values from an independent implementation of the same
    // defining equations (closed form above 6b, root-finding below).
    const Row rows[] = {
        {1.0, 1.8393972058910142e-11, 28.053097151766494},
        {5.0, 0.016064412985108183, 38.98808956719985},
        {14.0, 1.0176899655760585, 57.496278673774505},
        {35.0, 8.284240629402468, 92.87616113723212},
        {142.0, 74.91629155724523, 240.59228899193758},
        {143.0, 71.64723326802029, 34793.61184836191},
        {380.0, 257.07416497983314, 728.2102037476578},
        {1000.0, 793.7342049262971, 1351.1095943447551},
        {42814.0, 41400.67494331387, 44327.231038028745},
        {2207217.0, 2196996.2600075942, 2217533.28114424},
    };
    for (const Row& r : rows) {
        ChernoffInterval iv = chernoff_expectation_bounds(r.chi, eps);
        REQUIRE_CLOSE_REL(iv.low, r.low, 1e-9,
                          "expectation lower bound at chi=" << r.chi);
        REQUIRE_CLOSE_REL(iv.high, r.high, 1e-9,
                          "expectation upper bound at chi=" << r.chi);
        REQUIRE(iv.low <= r.chi && r.chi <= iv.high,
                "interval contains the observation");
    }

    ChernoffInterval loose = chernoff_expectation_bounds(1000.0, 1e-3);
    REQUIRE_CLOSE_REL(loose.low, 880.4462930159757, 1e-9,
                      "larger epsilon tightens the lower bound");
    REQUIRE_CLOSE_REL(loose.high, 1157.1229752776221, 1e-9,
                      "larger epsilon tightens the upper bound");

    // As epsilon approaches 1 the exponent budget drops to ln 2 and the
    // interval collapses toward the observation.
    ChernoffInterval tightest = chernoff_expectation_bounds(1e6, 0.99);
    REQUIRE(std::fabs(tightest.low / 1e6 - 1.0) < 0.005 &&
                std::fabs(tightest.high / 1e6 - 1.0) < 0.005,
            "near-unit epsilon collapses the interval toward chi");

    REQUIRE_THROWS(chernoff_expectation_bounds(5.0, 0.0), validation_error,
                   "epsilon = 0 rejected");
    REQUIRE_THROWS(chernoff_expectation_bounds(5.0, 1.0), validation_error,
                   "epsilon = 1 rejected");
    REQUIRE_THROWS(chernoff_expectation_bounds(-1.0, 1e-10), validation_error,
                   "negative count rejected");
    pass("count -> expectation bounds match the reference implementation");
}

void check_observation_bounds() {
    section("expectation -> observation bounds");
    const double eps = 1e-10;

    ChernoffInterval z = chernoff_observation_bounds(0.0, eps);
    REQUIRE(z.low == 0.0 && z.high == 0.0, "zero mean collapses to a point");
    REQUIRE(z.degenerate, "zero mean flags the degenerate interval");

    struct Row {
        double mean, low, high;
    };
    const Row rows[] = {
        {0.5, 0.0, 25.180057387553077},
        {3.0, 0.0, 31.68096470199106},
        {23.7189982, 0.0, 71.15699448066721},
        {1000.0, 770.0152068157967, 1229.9847931842032},
        {2.69e6, 2678691.753889191, 2701308.246110809},
    };
    for (const Row& r : rows) {
        ChernoffInterval iv = chernoff_observation_bounds(r.mean, eps);
        REQUIRE(!iv.degenerate, "positive mean is not degenerate");
        REQUIRE_CLOSE_REL(iv.low, r.low, 1e-9,
                          "observation lower bound at mean=" << r.mean);
        REQUIRE_CLOSE_REL(iv.high, r.high, 1e-9,
                          "observation upper bound at mean=" << r.mean);
    }

    ChernoffInterval loose = chernoff_observation_bounds(1000.0, 1e-3);
    REQUIRE_CLOSE_REL(loose.low, 872.8453905564337, 1e-9,
                      "observation bounds at epsilon 1e-3 (low)");
    REQUIRE_CLOSE_REL(loose.high, 1127.1546094435662, 1e-9,
                      "observation bounds at epsilon 1e-3 (high)");

    // Empirical coverage: the interval must contain a Poisson draw with
    // probability at least 1 - epsilon.
    std::mt19937_64 rng(20260816);
    std::poisson_distribution<long> poisson(1e4);
    ChernoffInterval iv = chernoff_observation_bounds(1e4, 1e-3);
    int misses = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const double draw = static_cast<double>(poisson(rng));
        if (draw < iv.low || draw > iv.high) ++misses;
    }
    REQUIRE(misses <= trials / 1000,
            "coverage over 1e4 Poisson draws at mean 1e4 (misses " << misses
                                                                   << ")");
    pass("expectation -> observation bounds match the reference implementation");
}

void check_lp_solver() {
    section("dense simplex solver");
    {
        LinearProgram lp;
        lp.objective = {-1.0, -1.0};
        lp.row_coeffs = {{1.0, 1.0}};
        lp.row_limits = {1.0};
        lp.lower = {0.0, 0.0};
        lp.upper = {1.0, 1.0};
        LpSolution s = solve_lp(lp);
        REQUIRE(s.feasible, "simple box LP solves");
        REQUIRE_CLOSE(s.objective, -1.0, 1e-12, "optimum of -x-y on x+y<=1");
    }
    {
        LinearProgram lp;  // no rows: optimum at the lower box corner
        lp.objective = {1.0};
        lp.lower = {2.0};
        lp.upper = {5.0};
        LpSolution s = solve_lp(lp);
        REQUIRE(s.feasible && std::fabs(s.x[0] - 2.0) < 1e-12,
                "pure box minimum sits at the lower bound");
    }
    {
        LinearProgram lp;  // x >= 3 conflicts with x <= 2
        lp.objective = {1.0};
        lp.row_coeffs = {{-1.0}};
        lp.row_limits = {-3.0};
        lp.lower = {0.0};
        lp.upper = {2.0};
        LpSolution s = solve_lp(lp);
        REQUIRE(!s.feasible, "conflicting bounds detected as infeasible");
        REQUIRE(!s.message.empty(), "infeasibility carries a message");
    }
    {
        LinearProgram lp;  // unbounded below
        lp.objective = {-1.0};
        lp.lower = {0.0};
        lp.upper = {std::numeric_limits<double>::infinity()};
        LpSolution s = solve_lp(lp);
        REQUIRE(!s.feasible && !s.message.empty(), "unboundedness detected");
    }
    {
        LinearProgram lp;  // two-phase path: x+y >= 1 with minimize x+y
        lp.objective = {1.0, 1.0};
        lp.row_coeffs = {{-1.0, -1.0}};
        lp.row_limits = {-1.0};
        lp.lower = {0.0, 0.0};
        lp.upper = {10.0, 10.0};
        LpSolution s = solve_lp(lp);
        REQUIRE(s.feasible, "negative-limit row forces phase 1");
        REQUIRE_CLOSE(s.objective, 1.0, 1e-10, "binding lower-sum constraint");
    }
    {
        LinearProgram lp;  // degenerate unique vertex (1,1)
        lp.objective = {1.0, 1.0};
        lp.row_coeffs = {{-1.0, -1.0}};
        lp.row_limits = {-2.0};
        lp.lower = {0.0, 0.0};
        lp.upper = {1.0, 1.0};
        LpSolution s = solve_lp(lp);
        REQUIRE(s.feasible, "tight corner reachable");
        REQUIRE_CLOSE(s.objective, 2.0, 1e-10, "corner (1,1) is optimal");
    }
    {
        LinearProgram lp;  // tiny objective coefficients must not break pivots
        lp.objective = {1e-16};
        lp.row_coeffs = {{-1.0}};
        lp.row_limits = {-1e6};
        lp.lower = {0.0};
        lp.upper = {1e7};
        LpSolution s = solve_lp(lp);
        REQUIRE(s.feasible, "scaled problem solves");
        REQUIRE_CLOSE_REL(s.objective, 1e-10, 1e-9,
                          "optimum unaffected by objective magnitude");
    }
    REQUIRE_THROWS(
        solve_lp(LinearProgram{{1.0}, {{1.0, 2.0}}, {1.0}, {0.0}, {1.0}}),
        validation_error, "ragged constraint row rejected");
    pass("simplex handles boxes, two-phase starts, degeneracy, and scaling");
}

void check_joint_bounds() {
    section("joint-constraint bounds on the measured ledgers");
    const SourceSpec source;  // defaults are the deployed intensities
    struct Expect {
        const char* tag;
        double splus, sminus;
    };
    const Expect expect[] = {
        {"14p1", 3.278366765677835e-10, 6.990916091616594e-11},
        {"17p8", 1.4124614512390296e-10, 3.0974762617617506e-11},
        {"21p5", 6.035381420319892e-11, 1.3522872608665137e-11},
    };
    for (const Expect& e : expect) {
        CountLedger led = load_ledger(e.tag);
        int napps = 0;
        const double sp = splus_min(led, source, 1e-10, &napps);
        REQUIRE(napps == 36, "lower-bound LP uses 26 joints + 5 boxes");
        const double sm = sminus_max(led, source, 1e-10, &napps);
        REQUIRE(napps == 36 + 19, "upper-bound LP uses 11 joints + 4 boxes");
        REQUIRE_CLOSE_REL(sp, e.splus, 1e-9,
                          "signal-combination lower bound, ledger " << e.tag);
        REQUIRE_CLOSE_REL(sm, e.sminus, 1e-9,
                          "subtracted-combination upper bound, ledger "
                              << e.tag);

        // Plug-in values are feasible points, so the optima must bracket them.
        const double wx = std::exp(-3 * source.mu_x) * std::pow(source.mu_x, 4);
        const double plug_sp =
            std::exp(-3 * source.mu_y) * std::pow(source.mu_y, 4) *
                led.m(Combo::xxx) / led.n(Combo::xxx) +
            wx * std::exp(-source.mu_y) *
                (led.m(Combo::oyy) / led.n(Combo::oyy) +
                 led.m(Combo::yoy) / led.n(Combo::yoy) +
                 led.m(Combo::yyo) / led.n(Combo::yyo)) +
            wx * std::exp(-3 * source.mu_y) * led.m(Combo::ooo) /
                led.n(Combo::ooo);
        const double plug_sm =
            wx * (led.m(Combo::yyy) / led.n(Combo::yyy) +
                  std::exp(-2 * source.mu_y) *
                      (led.m(Combo::yoo) / led.n(Combo::yoo) +
                       led.m(Combo::oyo) / led.n(Combo::oyo) +
                       led.m(Combo::ooy) / led.n(Combo::ooy)));
        REQUIRE(sp <= plug_sp, "lower bound does not exceed the plug-in");
        REQUIRE(sm >= plug_sm, "upper bound does not undercut the plug-in");

        // Loosening epsilon can only improve both bounds.
        const double sp_loose = splus_min(led, source, 1e-6);
        const double sm_loose = sminus_max(led, source, 1e-6);
        REQUIRE(sp_loose >= sp, "lower bound nondecreasing in epsilon");
        REQUIRE(sm_loose <= sm, "upper bound nonincreasing in epsilon");
    }

    // With near-unit epsilon and enormous counts both bounds pin to plug-in.
    {
        const SystemModel sys{0.5, 0.5, 0.5, 1e-6, 0.025, 0.25, 1.16};
        GainTable g = expected_gains(SourceSpec{}, sys, PulseModel{});
        CountLedger led;
        for (int i = 0; i < kComboCount; ++i) {
            const Combo c = static_cast<Combo>(i);
            const double q = g.q(c);
            const double n = std::ceil(1e9 / std::max(q, 1e-30));
            led.set(c, n, static_cast<std::uint64_t>(std::llround(n * q)));
        }
        const SourceSpec source2;
        const double sp = splus_min(led, source2, 1.0 - 1e-9);
        const double sm = sminus_max(led, source2, 1.0 - 1e-9);
        double plug_sp = 0.0, plug_sm = 0.0;
        {
            const double wx =
                std::exp(-3 * source2.mu_x) * std::pow(source2.mu_x, 4);
            plug_sp =
                std::exp(-3 * source2.mu_y) * std::pow(source2.mu_y, 4) *
                    led.m(Combo::xxx) / led.n(Combo::xxx) +
                wx * std::exp(-source2.mu_y) *
                    (led.m(Combo::oyy) / led.n(Combo::oyy) +
                     led.m(Combo::yoy) / led.n(Combo::yoy) +
                     led.m(Combo::yyo) / led.n(Combo::yyo)) +
                wx * std::exp(-3 * source2.mu_y) * led.m(Combo::ooo) /
                    led.n(Combo::ooo);
            plug_sm = wx * (led.m(Combo::yyy) / led.n(Combo::yyy) +
                            std::exp(-2 * source2.mu_y) *
                                (led.m(Combo::yoo) / led.n(Combo::yoo) +
                                 led.m(Combo::oyo) / led.n(Combo::oyo) +
                                 led.m(Combo::ooy) / led.n(Combo::ooy)));
        }
        REQUIRE_CLOSE_REL(sp, plug_sp, 1e-3,
                          "huge counts with loose epsilon pin the lower bound");
        REQUIRE_CLOSE_REL(sm, plug_sm, 1e-3,
                          "huge counts with loose epsilon pin the upper bound");
    }
    pass("joint-constraint bounds reproduce the reference optima and bracket "
         "plug-ins");
}

void check_h_range() {
    section("correction-term range");
    const SourceSpec source;
    struct Expect {
        const char* tag;
        double low, high;
    };
    const Expect expect[] = {
        {"14p1", 6.171934455392782e-07, 6.404284808281696e-07},
        {"17p8", 2.6146479810314405e-07, 2.780065987305377e-07},
        {"21p5", 1.0857128786921044e-07, 1.2074951042929116e-07},
    };
    for (const Expect& e : expect) {
        CountLedger led = load_ledger(e.tag);
        int napps = 0;
        const auto [lo, hi] = h_range(led, source, 1e-10, &napps);
        REQUIRE(napps == 6, "three observables, two sides each");
        REQUIRE_CLOSE_REL(lo, e.low, 1e-9, "range lower end, ledger " << e.tag);
        REQUIRE_CLOSE_REL(hi, e.high, 1e-9, "range upper end, ledger " << e.tag);
    }
    {
        CountLedger led = load_ledger("14p1");
        for (int i = 0; i < kComboCount; ++i) led.coincidences[i] = 0;
        const auto [lo, hi] = h_range(led, source, 1e-10);
        REQUIRE(lo == 0.0, "all-zero counts clamp the lower end at zero");
        REQUIRE(hi > 0.0, "zero-count upper end stays positive");
    }
    pass("correction-term range matches the reference intervals");
}

void check_pipeline() {
    section("ledger-to-rate pipeline");
    const SourceSpec source;
    const SystemModel system;  // only f = 1.16 is consumed here
    AnalysisConfig analysis;   // epsilon 1e-10, 64 scan points

    struct Expect {
        const char* tag;
        double rate, y111, e111, h_arg;
        double ez_ab, ez_ac, ez_bc;
    };
    const Expect expect[] = {
        {"14p1", 2.9914681596867035e-08, 0.00870461404538491,
         0.15035069610474996, 6.171934455392782e-07, 0.019232689149370073,
         0.019338947100471564, 0.02190519338655183},
        {"17p8", 4.650596017923341e-09, 0.003859353763190751,
         0.1763451737162661, 2.6146479810314405e-07, 0.02230530620562894,
         0.023333078594704963, 0.02409533495190339},
        {"21p5", 3.8314832293826297e-10, 0.0017828210748230921,
         0.22164784435723744, 1.0857128786921044e-07, 0.01818905373842065,
         0.019195553146291525, 0.02156887394575793},
    };
    for (const Expect& e : expect) {
        CountLedger led = load_ledger(e.tag);
        KeyRateReport rep = finite_key_rate(led, source, system, analysis);
        REQUIRE_CLOSE_REL(rep.rate_per_pulse, e.rate, 1e-9,
                          "key rate per pulse, ledger " << e.tag);
        REQUIRE_CLOSE_REL(rep.decoy.y111_real_low, e.y111, 1e-9,
                          "single-photon yield bound, ledger " << e.tag);
        REQUIRE_CLOSE_REL(rep.decoy.e111_real_high, e.e111, 1e-9,
                          "single-photon error bound, ledger " << e.tag);
        REQUIRE_CLOSE_REL(rep.h_argmin, e.h_arg, 1e-9,
                          "scan minimum sits at the interval floor");
        REQUIRE_CLOSE_REL(rep.qber_z_ab, e.ez_ab, 1e-12, "pairwise error ab");
        REQUIRE_CLOSE_REL(rep.qber_z_ac, e.ez_ac, 1e-12, "pairwise error ac");
        REQUIRE_CLOSE_REL(rep.qber_z_bc, e.ez_bc, 1e-12, "pairwise error bc");
        REQUIRE(rep.bound_applications == 190,
                "application tally: 36 + 19 + 6 + 1 + 2 per scan point");
        REQUIRE_CLOSE_REL(rep.failure_budget, 190e-10, 1e-12,
                          "failure budget is applications times epsilon");
        REQUIRE(rep.note.empty(), "positive rate carries no caveat note");
        REQUIRE(rep.rate_per_second == 0.0,
                "per-second rate deferred to the caller");
        REQUIRE_CLOSE_REL(
            rep.qber_x,
            static_cast<double>(led.e_xxx) / led.m(Combo::xxx), 1e-12,
            "plug-in x-basis error rate");

        // Scan refinement on a nested grid sequence can only lower the rate,
        // and 64 points is already converged on these inputs.
        AnalysisConfig coarse = analysis;
        coarse.h_scan_points = 2;
        double prev = finite_key_rate(led, source, system, coarse)
                          .rate_per_pulse;
        REQUIRE_CLOSE_REL(prev, rep.rate_per_pulse, 1e-3,
                          "two scan points already within 0.1% here");
        for (int pts = 3; pts <= 65; pts = 2 * pts - 1) {
            coarse.h_scan_points = pts;
            const double r =
                finite_key_rate(led, source, system, coarse).rate_per_pulse;
            REQUIRE(r <= prev * (1.0 + 1e-12),
                    "nested grids are nonincreasing at " << pts << " points");
            prev = r;
        }
    }

    {
        CountLedger led = load_ledger("14p1");
        for (int i = 0; i < kComboCount; ++i) led.coincidences[i] = 0;
        led.e_zzz_ab = led.e_zzz_ac = led.e_zzz_bc = 0;
        led.e_xxx = 0;
        led.e_yyy = 0;
        KeyRateReport rep = finite_key_rate(led, source, system, analysis);
        REQUIRE(rep.rate_per_pulse == 0.0, "all-zero ledger yields no key");
        REQUIRE(!rep.note.empty(), "zero rate explains itself");
    }
    pass("pipeline reproduces the reference analysis end to end");
}

}  // namespace

int main() {
    check_expectation_bounds();
    check_observation_bounds();
    check_lp_solver();
    check_joint_bounds();
    check_h_range();
    check_pipeline();
    std::cout << "all finite-key checks passed\n";
    return 0;
}
