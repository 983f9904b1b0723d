#include "qcc/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "qcc/detail/optics.hpp"
#include "qcc/detail/rng.hpp"
#include "qcc/ghz.hpp"

namespace qcc {
namespace {

using detail::Xoshiro256pp;

// ---------------------------------------------------------------------------
// Block-partitioned random streams. Every block of pulses owns an independent
// xoshiro256++ generator seeded through splitmix64 from (seed, block key), so
// totals are reproducible under any assignment of blocks to workers.

constexpr std::uint64_t kBlockPulses = std::uint64_t{1} << 20;
constexpr std::uint64_t kStreamStride = std::uint64_t{1} << 40;  // block-key spacing

// ---------------------------------------------------------------------------
// Exact binomial sampling, self-contained so results do not depend on any
// standard-library distribution implementation. Small means use cumulative
// inversion; large means use Hormann's transformed-rejection method with a
// log-space acceptance test.

std::uint64_t binomial_inversion(Xoshiro256pp& rng, std::uint64_t n, double p) {
    const double q = 1.0 - p;
    double f = std::exp(static_cast<double>(n) * std::log1p(-p));
    const double u = rng.u01();
    double cum = f;
    std::uint64_t k = 0;
    while (u > cum && k < n) {
        f *= (p / q) * static_cast<double>(n - k) / static_cast<double>(k + 1);
        if (f <= 0.0) break;  // tail mass below representable: stop walking
        ++k;
        cum += f;
    }
    return k;
}

std::uint64_t binomial_btrs(Xoshiro256pp& rng, std::uint64_t n, double p) {
    const double nd = static_cast<double>(n);
    const double np = nd * p;
    const double q = 1.0 - p;
    const double spq = std::sqrt(np * q);
    const double b = 1.15 + 2.53 * spq;
    const double a = -0.0873 + 0.0248 * b + 0.01 * p;
    const double c = np + 0.5;
    const double v_r = 0.92 - 4.2 / b;
    const double alpha = (2.83 + 5.1 / b) * spq;
    const double lpq = std::log(p / q);
    const double m = std::floor((nd + 1.0) * p);  // mode of the distribution
    const double h = std::lgamma(m + 1.0) + std::lgamma(nd - m + 1.0);
    for (;;) {
        const double u = rng.u01() - 0.5;
        double v = rng.u01();
        const double us = 0.5 - std::fabs(u);
        const double kd = std::floor((2.0 * a / us + b) * u + c);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kd);
        if (kd < 0.0 || kd > nd) continue;
        v = std::log(v * alpha / (a / (us * us) + b));
        const double accept = h - std::lgamma(kd + 1.0) -
                              std::lgamma(nd - kd + 1.0) + (kd - m) * lpq;
        if (v <= accept) return static_cast<std::uint64_t>(kd);
    }
}

std::uint64_t binomial(Xoshiro256pp& rng, std::uint64_t n, double p) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (p > 0.5) return n - binomial(rng, n, 1.0 - p);
    if (static_cast<double>(n) * p <= 30.0) return binomial_inversion(rng, n, p);
    return binomial_btrs(rng, n, p);
}

// ---------------------------------------------------------------------------
// Outcome decomposition. For one (role triple, basis setting) cell the
// probability that a path records at least one click is
//   1 - (1-p_d)^2 exp(-(iv+ih))
// because the interference cross term cancels from the sum of the two
// detector means. A triple coincidence requires every path to click, so the
// product of these phase-independent factors gates the detailed sampling:
// each pulse first lands in either an inert segment (no coincidence possible,
// only the pulse count advances) or a live branch that is then sampled with
// explicit phases, conditional click patterns, and error attribution.

struct Branch {
    detail::PortLoad load;
    double c_path[3] = {0.0, 0.0, 0.0};  // per-path P(at least one click)
    int combo = -1;
};

struct Segment {
    double prob = 0.0;
    int combo = -1;    // ledger row credited with the pulse; -1 = discarded
    int branch = -1;   // live-branch index; -1 = inert
};

struct OutcomeTable {
    std::vector<Segment> seg;      // sampling order; last absorbs remainders
    std::vector<double> suffix;    // suffix[i] = sum of seg[j>=i].prob
    std::vector<Branch> branches;
};

struct TableBuilder {
    OutcomeTable t;

    void add_branch(const Branch& br, double prob) {
        t.branches.push_back(br);
        t.seg.push_back({prob, br.combo, static_cast<int>(t.branches.size()) - 1});
    }
    void add_inert(int combo, double prob) { t.seg.push_back({prob, combo, -1}); }

    OutcomeTable finish() {
        double total = 0.0;
        for (const Segment& s : t.seg) total += s.prob;
        if (!(total > 0.0))
            throw analysis_error("simulate: outcome table has no probability mass");
        for (Segment& s : t.seg) s.prob /= total;
        t.suffix.resize(t.seg.size());
        double run = 0.0;
        for (std::size_t i = t.seg.size(); i-- > 0;) {
            run += t.seg[i].prob;
            t.suffix[i] = run;
        }
        return std::move(t);
    }
};

struct EngineCtx {
    double rho = 1.0;                    // cross-term scale for the visibility
    double xi[3] = {1.0, 1.0, 1.0};      // pairwise damping (paths ab, bc, ca)
    double p_d = 0.0;
    double e_d = 0.0;
    double two_pi = 2.0 * std::acos(-1.0);
};

EngineCtx make_ctx(const SystemModel& system, const PulseModel& pulse) {
    EngineCtx ctx;
    ctx.rho = std::cbrt(4.0 * system.visibility);
    const PathDamping damp = path_damping(pulse);
    ctx.xi[0] = damp.ab;
    ctx.xi[1] = damp.bc;
    ctx.xi[2] = damp.ca;
    ctx.p_d = system.p_d;
    ctx.e_d = system.e_d;
    return ctx;
}

Branch make_branch(int combo, const std::array<char, 3>& role,
                   const SourceSpec& source, const SystemModel& system,
                   int setting) {
    Branch br;
    br.combo = combo;
    br.load = detail::port_load(role, source, system, setting);
    const double q = 1.0 - system.p_d;
    for (int p = 0; p < 3; ++p) {
        const double total = br.load.iv[p] + br.load.ih[p];
        br.c_path[p] = 1.0 - q * q * std::exp(-total);
    }
    return br;
}

double role_prob(char role, const SourceSpec& s) {
    switch (role) {
        case 'z': return s.p_z;
        case 'x': return s.p_x;
        case 'y': return s.p_y;
        case 'o': return s.p_o;
    }
    throw analysis_error("role_prob: bad source role");
}

struct Partial {
    std::array<std::uint64_t, kComboCount> n{};
    std::array<std::uint64_t, kComboCount> m{};
    std::uint64_t e_ab = 0, e_ac = 0, e_bc = 0, e_xxx = 0, e_yyy = 0;

    void add(const Partial& o) {
        for (int i = 0; i < kComboCount; ++i) {
            n[i] += o.n[i];
            m[i] += o.m[i];
        }
        e_ab += o.e_ab;
        e_ac += o.e_ac;
        e_bc += o.e_bc;
        e_xxx += o.e_xxx;
        e_yyy += o.e_yyy;
    }
};

// One pulse that passed the all-paths-click gate: draw the relative phases,
// each path's conditional click pattern, and — for the rows that carry error
// counters — the signal/dark split and the error flag, mirroring the
// attribution used by the expected-gain calculation.
void sample_live(const Branch& br, const EngineCtx& ctx, Xoshiro256pp& rng,
                 Partial& acc) {
    const double phi_ab = ctx.two_pi * rng.u01();
    const double phi_ca = ctx.two_pi * rng.u01();
    const double phis[3] = {phi_ab, -phi_ab - phi_ca, phi_ca};
    int click_v[3] = {0, 0, 0};
    double p_signal[3] = {0.0, 0.0, 0.0};
    for (int p = 0; p < 3; ++p) {
        const detail::PathMeans pm =
            detail::path_means(br.load, p, ctx.rho, ctx.xi[p], phis[p]);
        const double sh = -std::expm1(-pm.nh), sv = -std::expm1(-pm.nv);
        const double ch = sh + (1.0 - sh) * ctx.p_d;
        const double cv = sv + (1.0 - sv) * ctx.p_d;
        const double p_h_only = ch * (1.0 - cv);
        const double p_v_only = (1.0 - ch) * cv;
        // Conditional on >=1 click: {H only, V only, both}; both detectors
        // firing voids the exactly-one-click-per-path coincidence rule.
        const double r = rng.u01() * br.c_path[p];
        if (r < p_h_only) {
            click_v[p] = 0;
            p_signal[p] = ch > 0.0 ? sh / ch : 0.0;
        } else if (r < p_h_only + p_v_only) {
            click_v[p] = 1;
            p_signal[p] = cv > 0.0 ? sv / cv : 0.0;
        } else {
            return;
        }
    }
    const int combo = br.combo;
    acc.m[combo] += 1;

    const Combo c = static_cast<Combo>(combo);
    if (c != Combo::zzz && c != Combo::xxx && c != Combo::yyy) return;
    bool all_signal = true;
    for (int p = 0; p < 3; ++p)
        if (!(rng.u01() < p_signal[p])) all_signal = false;
    if (br.load.is_z) {
        // Pairwise comparison of encoded bits (ab, ac, bc); dark-assisted
        // coincidences carry no bit information and error half the time.
        static constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
        std::uint64_t* slot[3] = {&acc.e_ab, &acc.e_ac, &acc.e_bc};
        for (int pp = 0; pp < 3; ++pp) {
            const bool differ =
                br.load.bit[kPairs[pp][0]] != br.load.bit[kPairs[pp][1]];
            const double perr =
                all_signal ? (differ ? 1.0 - ctx.e_d : ctx.e_d) : 0.5;
            if (rng.u01() < perr) *slot[pp] += 1;
        }
    } else {
        const int parity_out = click_v[0] ^ click_v[1] ^ click_v[2];
        const bool mismatch = (parity_out != br.load.parity_in);
        const double perr =
            all_signal ? (mismatch ? 1.0 - ctx.e_d : ctx.e_d) : 0.5;
        if (rng.u01() < perr) {
            if (c == Combo::xxx) acc.e_xxx += 1;
            else acc.e_yyy += 1;
        }
    }
}

// Distribute one block of pulses over the outcome segments by a chain of
// conditional binomial draws (an exact multinomial sample), then run the
// detailed sampler for every pulse that landed in a live branch.
void run_block(const OutcomeTable& t, const EngineCtx& ctx, Xoshiro256pp& rng,
               std::uint64_t n_pulses, Partial& acc) {
    std::uint64_t n_rem = n_pulses;
    const std::size_t last = t.seg.size() - 1;
    for (std::size_t i = 0; i < t.seg.size() && n_rem > 0; ++i) {
        std::uint64_t k;
        if (i == last) {
            k = n_rem;
        } else if (t.suffix[i] <= 0.0) {
            k = 0;
        } else {
            const double pc = t.seg[i].prob / t.suffix[i];
            k = pc >= 1.0 ? n_rem : binomial(rng, n_rem, pc);
        }
        if (t.seg[i].combo >= 0) acc.n[t.seg[i].combo] += k;
        if (t.seg[i].branch >= 0) {
            const Branch& br = t.branches[t.seg[i].branch];
            for (std::uint64_t e = 0; e < k; ++e) sample_live(br, ctx, rng, acc);
        }
        n_rem -= k;
    }
}

// Run total_pulses through the table, split into fixed-size blocks whose
// streams derive from (seed, key_base + block index). Workers pick blocks
// round-robin; partial sums are integer counts, so the merged result is
// identical for every worker count.
void run_stream(const OutcomeTable& t, const EngineCtx& ctx, std::uint64_t seed,
                std::uint64_t key_base, std::uint64_t total_pulses,
                int n_workers, Partial& out) {
    if (total_pulses == 0) return;
    const std::uint64_t n_blocks =
        (total_pulses + kBlockPulses - 1) / kBlockPulses;
    const auto worker = [&](std::uint64_t first, std::uint64_t step,
                            Partial& acc) {
        for (std::uint64_t b = first; b < n_blocks; b += step) {
            const std::uint64_t lo = b * kBlockPulses;
            const std::uint64_t count = std::min(kBlockPulses, total_pulses - lo);
            Xoshiro256pp rng(seed, key_base + b);
            run_block(t, ctx, rng, count, acc);
        }
    };
    if (n_workers <= 1 || n_blocks == 1) {
        worker(0, 1, out);
        return;
    }
    std::vector<Partial> parts(static_cast<std::size_t>(n_workers));
    std::vector<std::thread> pool;
    for (int w = 1; w < n_workers; ++w)
        pool.emplace_back(worker, static_cast<std::uint64_t>(w),
                          static_cast<std::uint64_t>(n_workers),
                          std::ref(parts[static_cast<std::size_t>(w)]));
    worker(0, static_cast<std::uint64_t>(n_workers), parts[0]);
    for (auto& th : pool) th.join();
    for (const Partial& p : parts) out.add(p);
}

void check_workers(int n_workers, const char* who) {
    if (n_workers < 1 || n_workers > 256)
        throw validation_error(std::string(who) +
                               ": n_workers must lie in [1, 256]");
}

constexpr std::uint64_t kMaxExactPulses = std::uint64_t{1} << 53;

}  // namespace

void SimPlan::validate() const {
    if (mode == QuotaMode::proportional) {
        if (n_pulses == 0)
            throw validation_error("plan: n_pulses must be > 0");
        if (n_pulses > kMaxExactPulses)
            throw validation_error("plan: n_pulses exceeds 2^53");
    } else {
        std::uint64_t total = 0;
        for (int i = 0; i < kComboCount; ++i) {
            if (budget[i] > kMaxExactPulses)
                throw validation_error(
                    std::string("plan: fixed budget exceeds 2^53 for ") +
                    combo_name(static_cast<Combo>(i)));
            total += budget[i];
        }
        if (total == 0)
            throw validation_error(
                "plan: fixed budget must contain at least one pulse");
    }
}

CountLedger simulate_counts(const SourceSpec& source, const SystemModel& system,
                            const SimPlan& plan, const PulseModel& pulse,
                            int n_workers) {
    source.validate();
    system.validate();
    pulse.validate();
    plan.validate();
    check_workers(n_workers, "simulate_counts");

    const EngineCtx ctx = make_ctx(system, pulse);
    Partial acc;

    if (plan.mode == QuotaMode::proportional) {
        TableBuilder tb;
        double inert[kComboCount] = {};
        double kept = 0.0;
        for (int ci = 0; ci < kComboCount; ++ci) {
            for (const auto& role : detail::combo_roles(static_cast<Combo>(ci))) {
                const double pm = role_prob(role[0], source) *
                                  role_prob(role[1], source) *
                                  role_prob(role[2], source);
                kept += pm;
                if (pm <= 0.0) continue;
                for (int setting = 0; setting < 8; ++setting) {
                    const Branch br =
                        make_branch(ci, role, source, system, setting);
                    const double gate =
                        br.c_path[0] * br.c_path[1] * br.c_path[2];
                    if (gate > 0.0) tb.add_branch(br, pm * 0.125 * gate);
                    inert[ci] += pm * 0.125 * (1.0 - gate);
                }
            }
        }
        for (int ci = 0; ci < kComboCount; ++ci) tb.add_inert(ci, inert[ci]);
        // Role triples outside the twelve ledger rows are announced and
        // discarded; the remainder segment absorbs them.
        tb.add_inert(-1, std::max(0.0, 1.0 - kept));
        const OutcomeTable t = tb.finish();
        run_stream(t, ctx, plan.seed, 0, plan.n_pulses, n_workers, acc);
    } else {
        for (int ci = 0; ci < kComboCount; ++ci) {
            if (plan.budget[ci] == 0) continue;
            TableBuilder tb;
            const auto roles = detail::combo_roles(static_cast<Combo>(ci));
            const double pm = 1.0 / static_cast<double>(roles.size());
            double inert = 0.0;
            for (const auto& role : roles) {
                for (int setting = 0; setting < 8; ++setting) {
                    const Branch br =
                        make_branch(ci, role, source, system, setting);
                    const double gate =
                        br.c_path[0] * br.c_path[1] * br.c_path[2];
                    if (gate > 0.0) tb.add_branch(br, pm * 0.125 * gate);
                    inert += pm * 0.125 * (1.0 - gate);
                }
            }
            tb.add_inert(ci, inert);
            const OutcomeTable t = tb.finish();
            run_stream(t, ctx, plan.seed,
                       static_cast<std::uint64_t>(ci + 1) * kStreamStride,
                       plan.budget[ci], n_workers, acc);
        }
    }

    CountLedger led;
    for (int i = 0; i < kComboCount; ++i) {
        led.pulses[i] = static_cast<double>(acc.n[i]);
        led.coincidences[i] = acc.m[i];
    }
    led.e_zzz_ab = acc.e_ab;
    led.e_zzz_ac = acc.e_ac;
    led.e_zzz_bc = acc.e_bc;
    led.e_xxx = acc.e_xxx;
    led.e_yyy = acc.e_yyy;
    led.validate();
    return led;
}

std::vector<HomScanPoint> simulate_hom_scan(
    double mu, const SystemModel& system,
    const std::vector<std::pair<double, double>>& grid,
    std::uint64_t n_per_point, std::uint64_t seed, int n_workers) {
    system.validate();
    if (!(mu > 0.0))
        throw validation_error("hom-scan: mu must be > 0");
    if (n_per_point == 0)
        throw validation_error("hom-scan: n_per_point must be > 0");
    if (n_per_point > kMaxExactPulses)
        throw validation_error("hom-scan: n_per_point exceeds 2^53");
    if (grid.empty())
        throw validation_error("hom-scan: grid must not be empty");
    if (grid.size() >= (std::uint64_t{1} << 20))
        throw validation_error("hom-scan: grid too large");
    check_workers(n_workers, "hom-scan");

    // Only the X intensity of the spec is read by an xxx role triple.
    SourceSpec src;
    src.mu_x = mu;
    src.mu_y = 2.0 * mu;
    const std::array<char, 3> role = {'x', 'x', 'x'};
    const int ci = static_cast<int>(Combo::xxx);

    std::vector<HomScanPoint> out;
    out.reserve(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        PulseModel pm;
        pm.dt_ab = grid[g].first;
        pm.dt_ac = grid[g].second;
        pm.dt_bc = pm.dt_ac - pm.dt_ab;
        pm.validate();
        const EngineCtx ctx = make_ctx(system, pm);

        TableBuilder tb;
        double inert = 0.0;
        for (int setting = 0; setting < 8; ++setting) {
            const Branch br = make_branch(ci, role, src, system, setting);
            const double gate = br.c_path[0] * br.c_path[1] * br.c_path[2];
            if (gate > 0.0) tb.add_branch(br, 0.125 * gate);
            inert += 0.125 * (1.0 - gate);
        }
        tb.add_inert(ci, inert);
        const OutcomeTable t = tb.finish();

        Partial acc;
        run_stream(t, ctx, seed, (static_cast<std::uint64_t>(g) + 1) * kStreamStride,
                   n_per_point, n_workers, acc);

        HomScanPoint pt;
        pt.dt_b = grid[g].first;
        pt.dt_c = grid[g].second;
        pt.coincidences = acc.m[ci];
        pt.errors = acc.e_xxx;
        pt.has_qber = pt.coincidences > 0;
        pt.qber_x = pt.has_qber ? static_cast<double>(pt.errors) /
                                      static_cast<double>(pt.coincidences)
                                : 0.0;
        out.push_back(pt);
    }
    return out;
}

}  // namespace qcc
