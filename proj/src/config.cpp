#include "qcc/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qcc {

namespace {

using nlohmann::json;

// Reads obj[key] into out when present, demanding a number.
void read_num(const json& obj, const char* section, const char* key, double& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number())
        throw validation_error(std::string("config: ") + section + "." + key +
                               " must be a number");
    out = it->get<double>();
}

void read_int(const json& obj, const char* section, const char* key, int& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number_integer())
        throw validation_error(std::string("config: ") + section + "." + key +
                               " must be an integer");
    out = it->get<int>();
}

void reject_unknown(const json& obj, const char* section,
                    std::initializer_list<const char*> known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool found = false;
        for (const char* k : known)
            if (it.key() == k) { found = true; break; }
        if (!found)
            throw validation_error(std::string("config: unknown field ") + section +
                                   "." + it.key());
    }
}

}  // namespace

Config parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw validation_error(std::string("config: JSON parse error: ") + e.what());
    }
    if (!root.is_object()) throw validation_error("config: top level must be an object");
    reject_unknown(root, "", {"source", "system", "pulse", "analysis"});

    Config cfg;
    if (root.contains("source")) {
        const json& s = root["source"];
        reject_unknown(s, "source",
                       {"mu_z", "mu_x", "mu_y", "mu_o", "p_z", "p_x", "p_y", "p_o"});
        read_num(s, "source", "mu_z", cfg.source.mu_z);
        read_num(s, "source", "mu_x", cfg.source.mu_x);
        read_num(s, "source", "mu_y", cfg.source.mu_y);
        read_num(s, "source", "mu_o", cfg.source.mu_o);
        read_num(s, "source", "p_z", cfg.source.p_z);
        read_num(s, "source", "p_x", cfg.source.p_x);
        read_num(s, "source", "p_y", cfg.source.p_y);
        read_num(s, "source", "p_o", cfg.source.p_o);
    }
    if (root.contains("system")) {
        const json& s = root["system"];
        reject_unknown(s, "system",
                       {"eta_a", "eta_b", "eta_c", "p_d", "e_d", "visibility", "f"});
        read_num(s, "system", "eta_a", cfg.system.eta_a);
        read_num(s, "system", "eta_b", cfg.system.eta_b);
        read_num(s, "system", "eta_c", cfg.system.eta_c);
        read_num(s, "system", "p_d", cfg.system.p_d);
        read_num(s, "system", "e_d", cfg.system.e_d);
        read_num(s, "system", "visibility", cfg.system.visibility);
        read_num(s, "system", "f", cfg.system.f);
    }
    if (root.contains("pulse")) {
        const json& s = root["pulse"];
        reject_unknown(s, "pulse",
                       {"gamma", "dt_ab", "dt_ac", "dt_bc",
                        "domega_ab", "domega_bc", "domega_ca"});
        read_num(s, "pulse", "gamma", cfg.pulse.gamma);
        read_num(s, "pulse", "dt_ab", cfg.pulse.dt_ab);
        read_num(s, "pulse", "dt_ac", cfg.pulse.dt_ac);
        read_num(s, "pulse", "dt_bc", cfg.pulse.dt_bc);
        read_num(s, "pulse", "domega_ab", cfg.pulse.domega_ab);
        read_num(s, "pulse", "domega_bc", cfg.pulse.domega_bc);
        read_num(s, "pulse", "domega_ca", cfg.pulse.domega_ca);
        // The third delay is derived when only two are given.
        if (s.contains("dt_ab") && s.contains("dt_ac") && !s.contains("dt_bc"))
            cfg.pulse.dt_bc = cfg.pulse.dt_ac - cfg.pulse.dt_ab;
    }
    if (root.contains("analysis")) {
        const json& s = root["analysis"];
        reject_unknown(s, "analysis", {"epsilon", "h_scan_points", "quadrature_points"});
        read_num(s, "analysis", "epsilon", cfg.analysis.epsilon);
        read_int(s, "analysis", "h_scan_points", cfg.analysis.h_scan_points);
        read_int(s, "analysis", "quadrature_points", cfg.analysis.quadrature_points);
    }

    cfg.source.validate();
    cfg.system.validate();
    cfg.pulse.validate();
    cfg.analysis.validate();
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_config(const Config& cfg) {
    json root;
    root["source"] = {{"mu_z", cfg.source.mu_z}, {"mu_x", cfg.source.mu_x},
                      {"mu_y", cfg.source.mu_y}, {"mu_o", cfg.source.mu_o},
                      {"p_z", cfg.source.p_z},   {"p_x", cfg.source.p_x},
                      {"p_y", cfg.source.p_y},   {"p_o", cfg.source.p_o}};
    root["system"] = {{"eta_a", cfg.system.eta_a}, {"eta_b", cfg.system.eta_b},
                      {"eta_c", cfg.system.eta_c}, {"p_d", cfg.system.p_d},
                      {"e_d", cfg.system.e_d},
                      {"visibility", cfg.system.visibility},
                      {"f", cfg.system.f}};
    root["pulse"] = {{"gamma", cfg.pulse.gamma},         {"dt_ab", cfg.pulse.dt_ab},
                     {"dt_ac", cfg.pulse.dt_ac},         {"dt_bc", cfg.pulse.dt_bc},
                     {"domega_ab", cfg.pulse.domega_ab}, {"domega_bc", cfg.pulse.domega_bc},
                     {"domega_ca", cfg.pulse.domega_ca}};
    root["analysis"] = {{"epsilon", cfg.analysis.epsilon},
                        {"h_scan_points", cfg.analysis.h_scan_points},
                        {"quadrature_points", cfg.analysis.quadrature_points}};
    return root.dump(2) + "\n";
}

}  // namespace qcc
