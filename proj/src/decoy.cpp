#include "qcc/decoy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcc/forward.hpp"
#include "qcc/math.hpp"

namespace qcc {

namespace {

double need(const GainTable& gains, Combo c, const char* who) {
    if (!gains.has(c))
        throw analysis_error(std::string(who) + ": gain table missing " +
                             combo_name(c));
    return gains.q(c);
}

double clamp01(double v) { return std::min(std::max(v, 0.0), 1.0); }

// Entropy of the binary error distribution, capped at the incoherent point;
// arguments beyond 1/2 carry no additional information.
double entropy_capped(double e) {
    return binary_entropy(std::min(clamp01(e), 0.5));
}

}  // namespace

GainTable gains_from_ledger(const CountLedger& ledger) {
    ledger.validate();
    GainTable table;
    for (int i = 0; i < kComboCount; ++i) {
        const Combo c = static_cast<Combo>(i);
        const double n = ledger.n(c);
        if (n <= 0.0) continue;  // leave the row absent
        table.set_q(c, static_cast<double>(ledger.m(c)) / n);
    }
    if (ledger.n(Combo::zzz) > 0.0) {
        table.eq_zzz_pairs[0] =
            static_cast<double>(ledger.e_zzz_ab) / ledger.n(Combo::zzz);
        table.eq_zzz_pairs[1] =
            static_cast<double>(ledger.e_zzz_ac) / ledger.n(Combo::zzz);
        table.eq_zzz_pairs[2] =
            static_cast<double>(ledger.e_zzz_bc) / ledger.n(Combo::zzz);
    }
    if (ledger.n(Combo::xxx) > 0.0)
        table.eq_xxx = static_cast<double>(ledger.e_xxx) / ledger.n(Combo::xxx);
    if (ledger.n(Combo::yyy) > 0.0)
        table.eq_yyy = static_cast<double>(ledger.e_yyy) / ledger.n(Combo::yyy);
    return table;
}

double h_term(const GainTable& gains, const SourceSpec& source) {
    const double ax = std::exp(-source.mu_x);
    return ax * 3.0 * need(gains, Combo::oxx_sym, "h_term") -
           ax * ax * 3.0 * need(gains, Combo::xoo_sym, "h_term") +
           ax * ax * ax * need(gains, Combo::ooo, "h_term");
}

double s_plus(const GainTable& gains, const SourceSpec& source) {
    const double wy = std::exp(-3.0 * source.mu_y) * std::pow(source.mu_y, 4);
    const double wx = std::exp(-3.0 * source.mu_x) * std::pow(source.mu_x, 4);
    return wy * need(gains, Combo::xxx, "s_plus") +
           wx * (std::exp(-3.0 * source.mu_y) *
                     need(gains, Combo::ooo, "s_plus") +
                 std::exp(-source.mu_y) *
                     (need(gains, Combo::oyy, "s_plus") +
                      need(gains, Combo::yoy, "s_plus") +
                      need(gains, Combo::yyo, "s_plus")));
}

double s_minus(const GainTable& gains, const SourceSpec& source) {
    const double wx = std::exp(-3.0 * source.mu_x) * std::pow(source.mu_x, 4);
    return wx * (need(gains, Combo::yyy, "s_minus") +
                 std::exp(-2.0 * source.mu_y) *
                     (need(gains, Combo::yoo, "s_minus") +
                      need(gains, Combo::oyo, "s_minus") +
                      need(gains, Combo::ooy, "s_minus")));
}

double y111_lower(double s_plus_low, double s_minus_high, double h,
                  const SourceSpec& source) {
    const double mu_x = source.mu_x, mu_y = source.mu_y;
    if (!(mu_x > 0.0) || !(mu_x < mu_y))
        throw validation_error(
            "y111_lower: elimination requires 0 < mu_x < mu_y");
    const double denom = std::exp(-3.0 * mu_x - 3.0 * mu_y) *
                         (std::pow(mu_x, 3) * std::pow(mu_y, 4) -
                          std::pow(mu_x, 4) * std::pow(mu_y, 3));
    const double w_xxx = std::exp(-3.0 * mu_y) * std::pow(mu_y, 4);
    return clamp01((s_plus_low - s_minus_high - w_xxx * h) / denom);
}

double e111_upper(double exx_qxx_high, double h, double y111_low,
                  const SourceSpec& source) {
    if (y111_low < 0.0)
        throw validation_error("e111_upper: yield bound must be >= 0");
    if (y111_low == 0.0) return 1.0;  // no single-photon events to bound
    const double mu_x = source.mu_x;
    const double denom = std::pow(mu_x, 3) * std::exp(-3.0 * mu_x) * y111_low;
    return clamp01((exx_qxx_high - 0.5 * h) / denom);
}

double key_rate_four_intensity(double y111, double e111_pz, double q_z,
                               double qber_ab, double qber_ac, double qber_bc,
                               const SourceSpec& source,
                               const SystemModel& system) {
    const double mu_z = source.mu_z;
    const double signal =
        std::pow(mu_z, 3) * std::exp(-3.0 * mu_z) * clamp01(y111) *
        (1.0 - entropy_capped(e111_pz));
    const double leak =
        std::max(q_z, 0.0) * system.f *
        std::max({entropy_capped(qber_ab), entropy_capped(qber_ac),
                  entropy_capped(qber_bc)});
    return std::max(std::pow(source.p_z, 3) * (signal - leak), 0.0);
}

CountLedger expected_ledger(const GainTable& gains, const SourceSpec& source,
                            double n_pulses) {
    source.validate();
    if (!(n_pulses > 0.0) || !std::isfinite(n_pulses))
        throw validation_error("expected_ledger: n_pulses must be positive");
    const double pz = source.p_z, px = source.p_x, py = source.p_y,
                 po = source.p_o;
    CountLedger led;
    auto fill = [&](Combo c, double prob) {
        const double nn = n_pulses * prob;
        led.set(c, nn,
                static_cast<std::uint64_t>(std::llround(
                    nn * need(gains, c, "expected_ledger"))));
    };
    fill(Combo::zzz, pz * pz * pz);
    fill(Combo::xxx, px * px * px);
    fill(Combo::yyy, py * py * py);
    fill(Combo::ooo, po * po * po);
    fill(Combo::oxx_sym, 3.0 * po * px * px);
    fill(Combo::xoo_sym, 3.0 * px * po * po);
    fill(Combo::oyy, po * py * py);
    fill(Combo::yoy, po * py * py);
    fill(Combo::yyo, po * py * py);
    fill(Combo::yoo, py * po * po);
    fill(Combo::oyo, py * po * po);
    fill(Combo::ooy, py * po * po);
    led.e_zzz_ab = static_cast<std::uint64_t>(
        std::llround(led.n(Combo::zzz) * gains.eq_zzz_pairs[0]));
    led.e_zzz_ac = static_cast<std::uint64_t>(
        std::llround(led.n(Combo::zzz) * gains.eq_zzz_pairs[1]));
    led.e_zzz_bc = static_cast<std::uint64_t>(
        std::llround(led.n(Combo::zzz) * gains.eq_zzz_pairs[2]));
    led.e_xxx = static_cast<std::uint64_t>(
        std::llround(led.n(Combo::xxx) * gains.eq_xxx));
    led.e_yyy = static_cast<std::uint64_t>(
        std::llround(led.n(Combo::yyy) * gains.eq_yyy));
    led.validate();
    return led;
}

void ThreeIntensitySource::validate() const {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw validation_error(msg);
    };
    require(mu > 0.0, "three-intensity: mu must be > 0");
    require(nu > 0.0, "three-intensity: nu must be > 0");
    require(nu < mu, "three-intensity: nu < mu violated");
    require(p_mu >= 0.0 && p_nu >= 0.0,
            "three-intensity: probabilities must be >= 0");
    require(p_mu + p_nu <= 1.0 + 1e-12,
            "three-intensity: p_mu + p_nu must not exceed 1");
    require(p_z_mu >= 0.0 && p_z_mu <= 1.0 && p_z_nu >= 0.0 && p_z_nu <= 1.0,
            "three-intensity: basis fractions must lie in [0, 1]");
}

namespace {

// Intensity mapping onto the standard source slots; selection probabilities
// live in ThreeIntensitySource (the key-basis decoy slice is discarded, so
// the effective role probabilities do not sum to one). The placeholders here
// only satisfy structural validation.
SourceSpec roles_of(const ThreeIntensitySource& params) {
    SourceSpec s;
    s.mu_z = params.mu;
    s.mu_x = params.nu;
    s.mu_y = params.mu;
    s.mu_o = 0.0;
    s.p_z = s.p_x = s.p_y = s.p_o = 0.25;
    return s;
}

}  // namespace

GainTable three_intensity_gains(const ThreeIntensitySource& params,
                                const SystemModel& system,
                                const PulseModel& pulse,
                                int quadrature_points) {
    params.validate();
    return expected_gains(roles_of(params), system, pulse, quadrature_points);
}

CountLedger three_intensity_ledger(const GainTable& gains,
                                   const ThreeIntensitySource& params,
                                   double n_pulses) {
    params.validate();
    if (!(n_pulses > 0.0) || !std::isfinite(n_pulses))
        throw validation_error(
            "three_intensity_ledger: n_pulses must be positive");
    SourceSpec roles = roles_of(params);
    roles.p_z = params.p_mu * params.p_z_mu;
    roles.p_x = params.p_nu * (1.0 - params.p_z_nu);
    roles.p_y = params.p_mu * (1.0 - params.p_z_mu);
    roles.p_o = 1.0 - params.p_mu - params.p_nu;
    // expected_ledger validates the source; the discarded key-basis decoy
    // slice makes these probabilities sum below one, so build directly.
    const double pz = roles.p_z, px = roles.p_x, py = roles.p_y,
                 po = roles.p_o;
    CountLedger led;
    auto fill = [&](Combo c, double prob) {
        const double nn = n_pulses * prob;
        led.set(c, nn,
                static_cast<std::uint64_t>(std::llround(
                    nn * need(gains, c, "three_intensity_ledger"))));
    };
    fill(Combo::zzz, pz * pz * pz);
    fill(Combo::xxx, px * px * px);
    fill(Combo::yyy, py * py * py);
    fill(Combo::ooo, po * po * po);
    fill(Combo::oxx_sym, 3.0 * po * px * px);
    fill(Combo::xoo_sym, 3.0 * px * po * po);
    fill(Combo::oyy, po * py * py);
    fill(Combo::yoy, po * py * py);
    fill(Combo::yyo, po * py * py);
    fill(Combo::yoo, py * po * po);
    fill(Combo::oyo, py * po * po);
    fill(Combo::ooy, py * po * po);
    led.e_zzz_ab = static_cast<std::uint64_t>(
        std::llround(led.n(Combo::zzz) * gains.eq_zzz_pairs[0]));
    led.e_zzz_ac = static_cast<std::uint64_t>(
        std::llround(led.n(Combo::zzz) * gains.eq_zzz_pairs[1]));
    led.e_zzz_bc = static_cast<std::uint64_t>(
        std::llround(led.n(Combo::zzz) * gains.eq_zzz_pairs[2]));
    led.e_xxx = static_cast<std::uint64_t>(
        std::llround(led.n(Combo::xxx) * gains.eq_xxx));
    led.e_yyy = static_cast<std::uint64_t>(
        std::llround(led.n(Combo::yyy) * gains.eq_yyy));
    led.validate();
    return led;
}

namespace {

// Gaussian standard-error interval of width n_sigma around an observed
// count m; the upper end carries the n^2 term so it stays conservative for
// small counts.
std::pair<double, double> gauss_interval(double m, double n_sigma) {
    const double s = n_sigma * std::sqrt(m);
    return {std::max(m - s, 0.0), m + s + n_sigma * n_sigma};
}

}  // namespace

double key_rate_three_intensity(const CountLedger& ledger,
                                const ThreeIntensitySource& params,
                                const SystemModel& system,
                                double n_sigma) {
    params.validate();
    system.validate();
    if (n_sigma < 0.0)
        throw validation_error(
            "key_rate_three_intensity: n_sigma must be >= 0");
    ledger.validate();
    const double mu = params.mu, nu = params.nu;

    // Per-combination frequency intervals.
    double lo[kComboCount], hi[kComboCount];
    for (int i = 0; i < kComboCount; ++i) {
        const Combo c = static_cast<Combo>(i);
        const double n = ledger.n(c);
        if (n <= 0.0)
            throw analysis_error(
                std::string("key_rate_three_intensity: no pulses recorded "
                            "for ") +
                combo_name(c));
        auto [l, h] = gauss_interval(static_cast<double>(ledger.m(c)),
                                     n_sigma);
        lo[i] = l / n;
        hi[i] = h / n;
    }
    auto L = [&](Combo c) { return lo[static_cast<int>(c)]; };
    auto U = [&](Combo c) { return hi[static_cast<int>(c)]; };

    const double av = std::exp(-nu);
    const double h_up = av * 3.0 * U(Combo::oxx_sym) -
                        av * av * 3.0 * L(Combo::xoo_sym) +
                        av * av * av * U(Combo::ooo);
    const double h_lo =
        std::max(0.0, av * 3.0 * L(Combo::oxx_sym) -
                          av * av * 3.0 * U(Combo::xoo_sym) +
                          av * av * av * L(Combo::ooo));

    const double wy = std::exp(-3.0 * mu) * std::pow(mu, 4);
    const double wx = std::exp(-3.0 * nu) * std::pow(nu, 4);
    const double splus_lo =
        wy * L(Combo::xxx) +
        wx * (std::exp(-3.0 * mu) * L(Combo::ooo) +
              std::exp(-mu) *
                  (L(Combo::oyy) + L(Combo::yoy) + L(Combo::yyo)));
    const double sminus_hi =
        wx * (U(Combo::yyy) +
              std::exp(-2.0 * mu) *
                  (U(Combo::yoo) + U(Combo::oyo) + U(Combo::ooy)));

    const double denom = std::exp(-3.0 * nu - 3.0 * mu) *
                         (std::pow(nu, 3) * std::pow(mu, 4) -
                          std::pow(nu, 4) * std::pow(mu, 3));
    double y_mean = (splus_lo - sminus_hi - wy * h_up) / denom;
    y_mean = std::min(std::max(y_mean, 0.0), 1.0);
    if (y_mean <= 0.0) return 0.0;

    const double eq_hi =
        gauss_interval(static_cast<double>(ledger.e_xxx), n_sigma).second /
        ledger.n(Combo::xxx);
    const double e_mean = std::min(
        std::max((eq_hi - 0.5 * h_lo) /
                     (std::pow(nu, 3) * std::exp(-3.0 * nu) * y_mean),
                 0.0),
        1.0);

    // Real-value conversion of the key-basis single-photon block.
    const double K =
        ledger.n(Combo::zzz) * std::pow(mu, 3) * std::exp(-3.0 * mu);
    const double yz =
        std::max(K * y_mean - n_sigma * std::sqrt(K * y_mean), 0.0) / K;
    if (yz <= 0.0) return 0.0;
    const double m_err = K * yz * e_mean;
    const double ez =
        (m_err + n_sigma * std::sqrt(m_err) + n_sigma * n_sigma) / (K * yz);

    const double m_zzz = static_cast<double>(ledger.m(Combo::zzz));
    if (m_zzz <= 0.0) return 0.0;
    const double q_z = m_zzz / ledger.n(Combo::zzz);
    const double leak =
        q_z * system.f *
        std::max({entropy_capped(static_cast<double>(ledger.e_zzz_ab) / m_zzz),
                  entropy_capped(static_cast<double>(ledger.e_zzz_ac) / m_zzz),
                  entropy_capped(static_cast<double>(ledger.e_zzz_bc) /
                                 m_zzz)});
    const double r = std::pow(mu, 3) * std::exp(-3.0 * mu) * yz *
                         (1.0 - entropy_capped(ez)) -
                     leak;
    const double pz_eff = params.p_mu * params.p_z_mu;
    return std::max(std::pow(pz_eff, 3) * std::max(r, 0.0), 0.0);
}

}  // namespace qcc
