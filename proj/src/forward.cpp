#include "qcc/forward.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qcc/detail/optics.hpp"
#include "qcc/math.hpp"
#include "qcc/quadrature.hpp"

namespace qcc {
namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// Probability that a photons arriving through the V port and b photons
// through the H port all leave on the same detector. The wave plate mixes
// the two ports, so photons entering through opposite ports bunch: for one
// photon per port the pair always exits together, unlike independent
// routing. General two-mode interference gives 2 (a+b)! / (2^(a+b) a! b!).
double all_same_detector(int a, int b) {
    const int m = a + b;
    if (m == 0) return 0.0;
    return 2.0 * factorial(m) /
           (std::pow(2.0, m) * factorial(a) * factorial(b));
}

// P(exactly one detector clicks on a path fed a photons via the V port and
// b photons via the H port), each photon independently transmitted with
// probability eta; the silent detector must not dark-click. With no photon
// detected the click must come from a dark count.
double one_click_path(int a, int b, double eta, double p_d) {
    double p = 0.0;
    for (int ap = 0; ap <= a; ++ap) {
        const double wa =
            binom(a, ap) * std::pow(eta, ap) * std::pow(1.0 - eta, a - ap);
        for (int bp = 0; bp <= b; ++bp) {
            const double wb = binom(b, bp) * std::pow(eta, bp) *
                              std::pow(1.0 - eta, b - bp);
            if (ap + bp == 0)
                p += wa * wb * 2.0 * p_d * (1.0 - p_d);
            else
                p += wa * wb * all_same_detector(ap, bp) * (1.0 - p_d);
        }
    }
    return p;
}

struct MemberGains {
    double q = 0.0;
    double eq_parity = 0.0;      // X-parity error gain (xxx / yyy)
    double eq_pair[3] = {0, 0, 0};  // pairwise Z error gains (ab, ac, bc)
};

// Gain and error gains for one concrete role assignment, averaged over the
// 8 basis settings and the two free relative phases.
MemberGains member_gains(const std::array<char, 3>& role,
                         const SourceSpec& source, const SystemModel& system,
                         const PulseModel& pulse, int nq) {
    const double p_d = system.p_d;
    const double e_d = system.e_d;
    // Per-path cross-term scale: the product over the three paths restores
    // the triple-coincidence interference visibility V.
    const double rho = std::cbrt(4.0 * system.visibility);
    const PathDamping damp = path_damping(pulse);
    const double xi[3] = {damp.ab, damp.bc, damp.ca};

    const PhaseGrid& grid = phase_grid(nq);
    const double two_pi = 2.0 * std::acos(-1.0);
    const double norm = 1.0 / (8.0 * two_pi * two_pi);

    MemberGains out;
    for (int setting = 0; setting < 8; ++setting) {
        const detail::PortLoad load =
            detail::port_load(role, source, system, setting);

        for (int i = 0; i < nq; ++i) {
            const double phi_ab = grid.node[i];
            for (int j = 0; j < nq; ++j) {
                const double phi_ca = grid.node[j];
                const double phi_bc = -phi_ab - phi_ca;
                const double phis[3] = {phi_ab, phi_bc, phi_ca};
                // Per path: silent probability and the signal/dark split of
                // a click for each of the two detectors (index 0 = H port).
                double silent[3][2], click[3][2], sig[3][2];
                for (int p = 0; p < 3; ++p) {
                    const detail::PathMeans pm =
                        detail::path_means(load, p, rho, xi[p], phis[p]);
                    const double nh = pm.nh, nv = pm.nv;
                    // -expm1 keeps the signal part accurate for tiny fields,
                    // and click = s + (1-s) p_d avoids cancellation when the
                    // click is dark-dominated.
                    const double sh = -std::expm1(-nh), sv = -std::expm1(-nv);
                    sig[p][0] = sh;
                    sig[p][1] = sv;
                    click[p][0] = sh + (1.0 - sh) * p_d;
                    click[p][1] = sv + (1.0 - sv) * p_d;
                    silent[p][0] = (1.0 - p_d) * (1.0 - sh);
                    silent[p][1] = (1.0 - p_d) * (1.0 - sv);
                }
                const double w = norm * grid.weight[i] * grid.weight[j];
                for (int pat = 0; pat < 8; ++pat) {
                    double pr = 1.0, pr_sig = 1.0;
                    int parity_out = 0;
                    for (int p = 0; p < 3; ++p) {
                        const int c = (pat >> p) & 1;  // 1 = V port clicked
                        parity_out ^= c;
                        pr *= click[p][c] * silent[p][1 - c];
                        pr_sig *= sig[p][c] * silent[p][1 - c];
                    }
                    out.q += w * pr;
                    const double dark_part = pr - pr_sig;
                    if (load.is_z) {
                        // Pairwise comparison of encoded bits (ab, ac, bc).
                        const int prs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
                        for (int pp = 0; pp < 3; ++pp) {
                            const bool differ =
                                load.bit[prs[pp][0]] != load.bit[prs[pp][1]];
                            const double perr =
                                differ ? (1.0 - e_d) : e_d;
                            out.eq_pair[pp] +=
                                w * (pr_sig * perr + 0.5 * dark_part);
                        }
                    } else {
                        const bool mism = (parity_out != load.parity_in);
                        const double perr = mism ? (1.0 - e_d) : e_d;
                        out.eq_parity +=
                            w * (pr_sig * perr + 0.5 * dark_part);
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace

double photon_number_yield_z(int na, int nb, int nc, double eta, double p_d) {
    if (na < 0 || nb < 0 || nc < 0)
        throw validation_error("photon_number_yield_z: negative photon count");
    const int n_u[3] = {na, nb, nc};
    double total = 0.0;
    for (int setting = 0; setting < 8; ++setting) {
        int v_load[3] = {0, 0, 0}, h_load[3] = {0, 0, 0};
        for (int u = 0; u < 3; ++u) {
            if ((setting >> u) & 1) v_load[u] += n_u[u];
            else h_load[(u + 2) % 3] += n_u[u];
        }
        double p = 1.0;
        for (int pth = 0; pth < 3; ++pth)
            p *= one_click_path(v_load[pth], h_load[pth], eta, p_d);
        total += p;
    }
    return total / 8.0;
}

std::pair<double, double> single_photon_yield(const SystemModel& system) {
    system.validate();
    const double eta = std::cbrt(system.eta_a * system.eta_b * system.eta_c);
    const double pd = system.p_d;
    const double q = 1.0 - eta;
    const double f3 = std::pow(1.0 - pd, 3);
    // X-basis closed form: the three photons land on three distinct paths in
    // one quarter of the routing outcomes; the remaining terms are dark-count
    // completions of partially transmitted events.
    const double y_x =
        f3 * (0.25 * eta * eta * eta + 1.5 * eta * eta * eta * pd +
              4.5 * eta * eta * q * pd + 3.0 * eta * eta * q * pd * pd +
              12.0 * eta * q * q * pd * pd + 8.0 * q * q * q * pd * pd * pd);
    // Z route: direct enumeration over the 8 bit settings.
    const double y_z = photon_number_yield_z(1, 1, 1, eta, pd);
    const double scale = std::max(y_x, 1e-300);
    if (std::fabs(y_z - y_x) > 1e-12 * scale)
        throw analysis_error(
            "single_photon_yield: Z and X routes disagree");
    return {y_z, y_x};
}

double single_photon_error(const SystemModel& system) {
    system.validate();
    const double eta = std::cbrt(system.eta_a * system.eta_b * system.eta_c);
    const double pd = system.p_d;
    const double ed = system.e_d;
    const double q = 1.0 - eta;
    const double f3 = std::pow(1.0 - pd, 3);
    const double y = single_photon_yield(system).second;
    if (y <= 0.0)
        throw analysis_error(
            "single_photon_error: zero single-photon yield (eta and p_d both zero)");
    const double num =
        f3 * (0.25 * ed * eta * eta * eta + 0.75 * eta * eta * eta * pd +
              2.25 * eta * eta * q * pd + 1.5 * eta * eta * q * pd * pd +
              6.0 * eta * q * q * pd * pd + 4.0 * q * q * q * pd * pd * pd);
    return num / y;
}

GainTable expected_gains(const SourceSpec& source, const SystemModel& system,
                         const PulseModel& pulse, int quadrature_points) {
    source.validate();
    system.validate();
    pulse.validate();
    if (quadrature_points < 8)
        throw validation_error("expected_gains: quadrature_points must be >= 8");

    GainTable table;
    for (int ci = 0; ci < kComboCount; ++ci) {
        const Combo combo = static_cast<Combo>(ci);
        const auto members = detail::combo_roles(combo);
        MemberGains acc;
        for (const auto& mem : members) {
            MemberGains g =
                member_gains(mem, source, system, pulse, quadrature_points);
            acc.q += g.q;
            acc.eq_parity += g.eq_parity;
            for (int p = 0; p < 3; ++p) acc.eq_pair[p] += g.eq_pair[p];
        }
        const double inv = 1.0 / static_cast<double>(members.size());
        table.gain[ci] = acc.q * inv;
        table.present[ci] = true;
        if (combo == Combo::zzz)
            for (int p = 0; p < 3; ++p)
                table.eq_zzz_pairs[p] = acc.eq_pair[p] * inv;
        if (combo == Combo::xxx) table.eq_xxx = acc.eq_parity * inv;
        if (combo == Combo::yyy) table.eq_yyy = acc.eq_parity * inv;
    }
    return table;
}

double infinite_decoy_key_rate(const SourceSpec& source,
                               const SystemModel& system,
                               int quadrature_points) {
    source.validate();
    system.validate();
    const auto y_pair = single_photon_yield(system);
    const double y111 = y_pair.second;
    if (y111 <= 0.0) return 0.0;
    const double e111 = single_photon_error(system);

    PulseModel aligned;  // protocol operation: no deliberate mismatch
    GainTable gains = expected_gains(source, system, aligned, quadrature_points);
    const double q_z = gains.q(Combo::zzz);
    if (q_z <= 0.0) return 0.0;

    double worst_pair_entropy = 0.0;
    for (int p = 0; p < 3; ++p) {
        const double e = std::min(gains.eq_zzz_pairs[p] / q_z, 0.5);
        worst_pair_entropy = std::max(worst_pair_entropy, binary_entropy(e));
    }
    const double mu_z = source.mu_z;
    const double gain_single =
        mu_z * mu_z * mu_z * std::exp(-3.0 * mu_z) * y111;
    const double rate =
        source.p_z * source.p_z * source.p_z *
        (gain_single * (1.0 - binary_entropy(std::min(e111, 0.5))) -
         q_z * system.f * worst_pair_entropy);
    return std::max(rate, 0.0);
}

}  // namespace qcc
