#include "qcc/detail/optics.hpp"

namespace qcc::detail {

std::vector<std::array<char, 3>> combo_roles(Combo c) {
    switch (c) {  // exhaustive over the ledger combinations
        default: break;
        case Combo::zzz: return {{{'z', 'z', 'z'}}};
        case Combo::xxx: return {{{'x', 'x', 'x'}}};
        case Combo::yyy: return {{{'y', 'y', 'y'}}};
        case Combo::ooo: return {{{'o', 'o', 'o'}}};
        case Combo::oxx_sym:
            return {{{'o', 'x', 'x'}}, {{'x', 'o', 'x'}}, {{'x', 'x', 'o'}}};
        case Combo::xoo_sym:
            return {{{'x', 'o', 'o'}}, {{'o', 'x', 'o'}}, {{'o', 'o', 'x'}}};
        case Combo::oyy: return {{{'o', 'y', 'y'}}};
        case Combo::yoy: return {{{'y', 'o', 'y'}}};
        case Combo::yyo: return {{{'y', 'y', 'o'}}};
        case Combo::yoo: return {{{'y', 'o', 'o'}}};
        case Combo::oyo: return {{{'o', 'y', 'o'}}};
        case Combo::ooy: return {{{'o', 'o', 'y'}}};
    }
    throw analysis_error("combo_roles: unknown combination");
}

PortLoad port_load(const std::array<char, 3>& role, const SourceSpec& source,
                   const SystemModel& system, int setting) {
    const double eta_u[3] = {system.eta_a, system.eta_b, system.eta_c};
    double mu_u[3];
    for (int u = 0; u < 3; ++u) {
        switch (role[u]) {
            case 'z': mu_u[u] = source.mu_z; break;
            case 'x': mu_u[u] = source.mu_x; break;
            case 'y': mu_u[u] = source.mu_y; break;
            case 'o': mu_u[u] = source.mu_o; break;
            default: throw analysis_error("port_load: bad source role");
        }
    }
    PortLoad out;
    // zzz is the only combination prepared in Z; everything else is X with
    // vacuum slots contributing zero field.
    out.is_z = (role[0] == 'z');
    for (int u = 0; u < 3; ++u) out.bit[u] = (setting >> u) & 1;
    for (int u = 0; u < 3; ++u) {
        const double inten = eta_u[u] * mu_u[u];
        if (inten <= 0.0) continue;
        const int vpath = u, hpath = (u + 2) % 3;
        if (out.is_z) {
            if (out.bit[u]) out.iv[vpath] += inten;
            else out.ih[hpath] += inten;
        } else {
            out.iv[vpath] += 0.5 * inten;
            out.ih[hpath] += 0.5 * inten;
            out.theta_v[vpath] = out.bit[u] ? std::acos(-1.0) : 0.0;
        }
    }
    // Input parity for the X classes: an even number of "minus" states should
    // project onto the even-parity detector pattern.
    for (int u = 0; u < 3; ++u)
        if (!out.is_z && role[u] != 'o') out.parity_in ^= out.bit[u];
    return out;
}

}  // namespace qcc::detail
