// Forward model: closed-form yields/errors, coherent-pulse gain tables,
// Poisson decomposition consistency, and the asymptotic key rate.

#include <cmath>

#include "qcc/forward.hpp"
#include "qcc/math.hpp"
#include "test_util.hpp"

namespace {

using namespace qcc;

SystemModel sym_system(double eta, double p_d, double e_d, double vis = 0.25) {
    SystemModel s;
    s.eta_a = s.eta_b = s.eta_c = eta;
    s.p_d = p_d;
    s.e_d = e_d;
    s.visibility = vis;
    return s;
}

void test_single_photon_yield() {
    section("single-photon yield");
    auto [yz_ideal, yx_ideal] = single_photon_yield(sym_system(1.0, 0.0, 0.0));
    REQUIRE_CLOSE(yx_ideal, 0.25, 1e-15, "lossless dark-free yield is 1/4");
    REQUIRE_CLOSE(yz_ideal, 0.25, 1e-15, "Z route agrees");

    auto [yz_dark, yx_dark] = single_photon_yield(sym_system(0.0, 1e-6, 0.0));
    REQUIRE_CLOSE_REL(yx_dark, 7.999976000023999e-18, 1e-12,
                      "pure dark-count yield");
    REQUIRE_CLOSE_REL(yz_dark, yx_dark, 1e-12, "routes agree at eta = 0");

    auto [yz_mid, yx_mid] = single_photon_yield(sym_system(0.5, 1e-6, 0.0));
    REQUIRE_CLOSE_REL(yx_mid, 3.125065624971875e-02, 1e-12,
                      "eta = 0.5 yield (frozen reference)");
    REQUIRE_CLOSE_REL(yz_mid, yx_mid, 1e-12, "routes agree at eta = 0.5");
    pass("closed-form yields and dual-route agreement");

    // Asymmetric transmittances collapse onto the geometric mean.
    SystemModel asym = sym_system(0.5, 1e-6, 0.0);
    asym.eta_a = 0.4;
    asym.eta_b = 0.5;
    asym.eta_c = 0.625;  // product 0.125 -> geometric mean 0.5
    auto [yz_asym, yx_asym] = single_photon_yield(asym);
    REQUIRE_CLOSE_REL(yx_asym, yx_mid, 1e-12, "geometric-mean transmittance");
    (void)yz_asym;
    pass("asymmetric transmittance uses the geometric mean");
}

void test_single_photon_error() {
    section("single-photon error rate");
    REQUIRE_CLOSE(single_photon_error(sym_system(1.0, 0.0, 0.015)), 0.015,
                  1e-15, "lossless error rate equals the misalignment");
    REQUIRE_CLOSE(single_photon_error(sym_system(0.0, 1e-6, 0.3)), 0.5, 1e-12,
                  "dark-count-only events are random");
    REQUIRE_CLOSE_REL(single_photon_error(sym_system(0.8, 1e-6, 0.025)),
                      2.500498745048174e-02, 1e-12,
                      "eta = 0.8 error rate (frozen reference)");
    REQUIRE_THROWS(single_photon_error(sym_system(0.0, 0.0, 0.0)),
                   analysis_error, "degenerate zero yield rejected");
    pass("error-rate limits and frozen reference");
}

void test_gain_table_reference() {
    section("gain table against quadrature reference");
    SourceSpec src;  // mu_z=0.1, mu_x=0.0281, mu_y=0.152
    SystemModel sys = sym_system(0.5, 1e-6, 0.025);
    PulseModel aligned;
    GainTable g = expected_gains(src, sys, aligned);

    struct Ref { Combo c; double q; };
    const Ref refs[] = {
        {Combo::zzz, 2.793711382301140e-05},
        {Combo::xxx, 2.702588421728957e-06},
        {Combo::yyy, 3.809267115969745e-04},
        {Combo::ooo, 7.999976000023999e-18},
        {Combo::oxx_sym, 6.805958710824158e-07},
        {Combo::xoo_sym, 9.772197470629018e-11},
        {Combo::oyy, 9.888953374236801e-05},
        {Combo::yoy, 9.888953374236799e-05},
        {Combo::yyo, 9.888953374236799e-05},
        {Combo::yoo, 2.728346008445593e-09},
        {Combo::oyo, 2.728346008445593e-09},
        {Combo::ooy, 2.728346008445593e-09},
    };
    for (const Ref& r : refs)
        REQUIRE_CLOSE_REL(g.q(r.c), r.q, 1e-9,
                          std::string("gain for ") + combo_name(r.c));
    REQUIRE_CLOSE_REL(g.eq_xxx, 1.028803975532932e-06, 1e-9, "xxx error gain");
    REQUIRE_CLOSE_REL(g.eq_yyy, 1.439263234831106e-04, 1e-9, "yyy error gain");
    for (int p = 0; p < 3; ++p)
        REQUIRE_CLOSE_REL(g.eq_zzz_pairs[p], 7.032247751362471e-07, 1e-9,
                          "zzz pairwise error gain");
    pass("twelve gains and four error gains match the reference model");

    // Symmetry invariant (equal per-user transmittance).
    REQUIRE_CLOSE_REL(g.q(Combo::yoy), g.q(Combo::oyy), 1e-12, "yoy == oyy");
    REQUIRE_CLOSE_REL(g.q(Combo::yyo), g.q(Combo::oyy), 1e-12, "yyo == oyy");
    REQUIRE_CLOSE_REL(g.q(Combo::oyo), g.q(Combo::yoo), 1e-12, "oyo == yoo");
    REQUIRE_CLOSE_REL(g.q(Combo::ooy), g.q(Combo::yoo), 1e-12, "ooy == yoo");
    pass("cyclic symmetry of pooled decoy combinations");
}

void test_gain_examples() {
    section("gain edge cases");
    // Lossless, dark-free signal events: only the two aligned settings can
    // produce a triple coincidence, each path splitting mu/2 per detector.
    SourceSpec src;
    GainTable g = expected_gains(src, sym_system(1.0, 0.0, 0.0), PulseModel{});
    const double s = 2.0 * std::exp(-0.05) * (1.0 - std::exp(-0.05));
    REQUIRE_CLOSE_REL(g.q(Combo::zzz), 0.25 * s * s * s, 1e-12,
                      "lossless signal gain");
    REQUIRE_CLOSE_REL(g.q(Combo::zzz), 1.996914472179398e-04, 1e-12,
                      "lossless signal gain frozen value");

    // Vacuum triple: three independent dark coincidences.
    GainTable g2 = expected_gains(src, sym_system(0.5, 1e-6, 0.025), PulseModel{});
    const double pd = 1e-6;
    const double dark_path = 2.0 * pd * (1.0 - pd);
    REQUIRE_CLOSE_REL(g2.q(Combo::ooo), dark_path * dark_path * dark_path,
                      1e-12, "vacuum gain is the dark-coincidence cube");
    pass("closed-form gain anchors");

    // X-parity error fraction: approaches 1/2 - visibility/(2*0.25) * 1/2 ...
    // i.e. 0.375 at the visibility ceiling, shifted by 0.25 * e_d for
    // misalignment, once dark counts and multiphoton terms are negligible.
    SourceSpec weak;
    weak.mu_x = 1e-4;
    weak.mu_y = 2e-4;
    GainTable g3 = expected_gains(weak, sym_system(0.93, 1e-12, 0.0), PulseModel{});
    REQUIRE_CLOSE(g3.eq_xxx / g3.q(Combo::xxx), 0.375, 5e-4,
                  "parity error floor at perfect alignment");
    GainTable g4 =
        expected_gains(weak, sym_system(0.93, 1e-12, 0.015), PulseModel{});
    REQUIRE_CLOSE(g4.eq_xxx / g4.q(Combo::xxx), 0.375 + 0.25 * 0.015, 5e-4,
                  "misalignment shifts the X error by e_d/4");
    pass("X error floor and misalignment shift");
}

void test_poisson_decomposition() {
    section("Poisson decomposition consistency");
    const double mu = 1e-3, eta = 0.5, pd = 1e-6;
    SourceSpec src;
    src.mu_z = mu;
    src.mu_x = 2e-4;
    src.mu_y = 2e-3;
    GainTable g = expected_gains(src, sym_system(eta, pd, 0.025), PulseModel{});

    double a[3];
    for (int n = 0; n < 3; ++n) {
        double fact = (n == 2) ? 2.0 : 1.0;
        a[n] = std::exp(-mu) * std::pow(mu, n) / fact;
    }
    double dec = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                dec += a[i] * a[j] * a[k] * photon_number_yield_z(i, j, k, eta, pd);

    REQUIRE_CLOSE(dec, g.q(Combo::zzz), 1e-9,
                  "decomposition within the absolute budget");
    REQUIRE_CLOSE_REL(dec, g.q(Combo::zzz), 1e-5,
                      "decomposition residual is only the >2-photon tail");
    pass("two-photon truncated decomposition reproduces the signal gain");
}

void test_infinite_decoy_rate() {
    section("asymptotic key rate");
    SourceSpec src;
    REQUIRE(infinite_decoy_key_rate(src, sym_system(0.0, 1e-6, 0.025)) == 0.0,
            "no transmission yields zero rate");
    REQUIRE(infinite_decoy_key_rate(src, sym_system(0.7, 1e-7, 0.5)) == 0.0,
            "half-error misalignment yields zero rate");

    SystemModel low_loss = sym_system(0.93 * std::pow(10.0, -3.0 / 30.0), 1e-7, 0.015);
    REQUIRE(infinite_decoy_key_rate(src, low_loss) > 0.0,
            "low loss yields a positive rate");

    REQUIRE_CLOSE_REL(infinite_decoy_key_rate(src, sym_system(0.5, 1e-6, 0.025)),
                      4.941264361687030e-07, 1e-9,
                      "frozen asymptotic rate at eta = 0.5");
    pass("asymptotic rate anchors");
}

}  // namespace

int main() {
    test_single_photon_yield();
    test_single_photon_error();
    test_gain_table_reference();
    test_gain_examples();
    test_poisson_decomposition();
    test_infinite_decoy_rate();
    std::cout << "\nall forward-model checks passed\n";
    return 0;
}
