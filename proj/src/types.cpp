#include "qcc/types.hpp"

#include <cmath>

namespace qcc {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw validation_error(msg);
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

void SourceSpec::validate() const {
    require(mu_z > 0.0, "source: mu_z must be > 0");
    require(mu_x >= 0.0, "source: mu_x must be >= 0");
    require(mu_x < mu_y, "source: mu_x < mu_y violated");
    require(mu_o == 0.0, "source: mu_o must be 0");
    require(p_z >= 0.0 && p_x >= 0.0 && p_y >= 0.0 && p_o >= 0.0,
            "source: selection probabilities must be >= 0");
    double sum = p_z + p_x + p_y + p_o;
    require(std::fabs(sum - 1.0) <= 1e-12,
            "source: p_z+p_x+p_y+p_o must equal 1 (check p_o)");
}

void SystemModel::validate() const {
    require(in_unit(eta_a) && in_unit(eta_b) && in_unit(eta_c),
            "system: transmittances must lie in [0,1]");
    require(in_unit(p_d), "system: p_d must lie in [0,1]");
    require(in_unit(e_d), "system: e_d must lie in [0,1]");
    require(visibility >= 0.0 && visibility <= 0.25,
            "system: visibility must lie in [0,0.25]");
    require(f >= 1.0, "system: f must be >= 1");
}

void PulseModel::validate() const {
    require(gamma > 0.0, "pulse: gamma must be > 0");
    // The three pairwise delays are redundant; when all are supplied they must
    // be mutually consistent.
    if (dt_ab != 0.0 || dt_ac != 0.0 || dt_bc != 0.0) {
        require(std::fabs(dt_bc - (dt_ac - dt_ab)) <= 1e-12,
                "pulse: dt_bc must equal dt_ac - dt_ab");
    }
}

void AnalysisConfig::validate() const {
    require(epsilon > 0.0 && epsilon < 1.0, "analysis: epsilon must lie in (0,1)");
    require(h_scan_points >= 2, "analysis: h_scan_points must be >= 2");
    require(quadrature_points >= 8, "analysis: quadrature_points must be >= 8");
}

namespace {
constexpr const char* kComboNames[kComboCount] = {
    "zzz", "xxx", "yyy", "ooo", "oxx_sym", "xoo_sym",
    "oyy", "yoy", "yyo", "yoo", "oyo", "ooy",
};
}  // namespace

const char* combo_name(Combo c) { return kComboNames[static_cast<int>(c)]; }

Combo combo_from_name(const std::string& name) {
    for (int i = 0; i < kComboCount; ++i) {
        if (name == kComboNames[i]) return static_cast<Combo>(i);
    }
    throw validation_error("unknown source combination '" + name + "'");
}

void CountLedger::validate() const {
    for (int i = 0; i < kComboCount; ++i) {
        const auto c = static_cast<Combo>(i);
        if (pulses[i] < 0.0)
            throw validation_error(std::string("ledger: negative pulse count for ") +
                                   combo_name(c));
        if (static_cast<double>(coincidences[i]) > pulses[i])
            throw validation_error(std::string("ledger: coincidences exceed pulses for ") +
                                   combo_name(c));
    }
    const std::uint64_t m_zzz = m(Combo::zzz);
    if (e_zzz_ab > m_zzz || e_zzz_ac > m_zzz || e_zzz_bc > m_zzz)
        throw validation_error("ledger: zzz error count exceeds coincidences");
    if (e_xxx > m(Combo::xxx))
        throw validation_error("ledger: xxx error count exceeds coincidences");
    if (e_yyy > m(Combo::yyy))
        throw validation_error("ledger: yyy error count exceeds coincidences");
}

double GainTable::q(Combo c) const {
    if (!present[static_cast<int>(c)])
        throw analysis_error(std::string("gain table is missing combination ") +
                             combo_name(c));
    return gain[static_cast<int>(c)];
}

}  // namespace qcc
