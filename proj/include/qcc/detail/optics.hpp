#pragma once
// Shared internals of the analyzer optics: the role triples making up each
// ledger row, how one concrete role triple and basis setting load the six
// detector ports, and the per-path detector means at fixed relative phases.
// Both the phase-averaged gain calculation and the event-level simulator
// build on these primitives so the two models cannot drift apart.

#include <array>
#include <cmath>
#include <vector>

#include "qcc/types.hpp"

namespace qcc::detail {

// Role triples ('z'/'x'/'y'/'o' per user) aggregated by a ledger row.
// Pooled rows list their three cyclic placements; all others one triple.
std::vector<std::array<char, 3>> combo_roles(Combo c);

// Port loading of the three analyzer paths for one role triple and one
// 3-bit basis setting (bit u = user u's state within its basis).
// The V side of user u feeds path u, the H side feeds path (u+2)%3.
// Z states put the full intensity on the port selected by the bit; X states
// split it evenly across both ports and carry the bit as a sign phase on
// the V port. Intensities include the per-user transmittance.
struct PortLoad {
    double iv[3] = {0.0, 0.0, 0.0};       // V-port intensity per path
    double ih[3] = {0.0, 0.0, 0.0};       // H-port intensity per path
    double theta_v[3] = {0.0, 0.0, 0.0};  // V-port sign phase per path
    int bit[3] = {0, 0, 0};               // encoded bits of the setting
    bool is_z = false;                    // Z-basis preparation (zzz row)
    int parity_in = 0;                    // encoded parity of the X states
};

PortLoad port_load(const std::array<char, 3>& role, const SourceSpec& source,
                   const SystemModel& system, int setting);

// Mean photon numbers of the two detectors on path p at relative source
// phase phi. rho scales the interference cross term to the target
// visibility; xi is the pairwise damping factor of the path.
struct PathMeans {
    double nh = 0.0;
    double nv = 0.0;
};

inline PathMeans path_means(const PortLoad& load, int p, double rho, double xi,
                            double phi) {
    const double base = 0.5 * (load.iv[p] + load.ih[p]);
    const double cross = std::sqrt(load.iv[p] * load.ih[p]) * rho * xi *
                         std::cos(phi + load.theta_v[p]);
    return {base + cross, base - cross};
}

}  // namespace qcc::detail
