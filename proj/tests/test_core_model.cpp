// Domain types, validation messages, JSON config round-trips, and the
// counts/errors CSV formats.

#include <cstdio>
#include <fstream>
#include <functional>
#include <string>

#include "qcc/config.hpp"
#include "qcc/csv.hpp"
#include "qcc/types.hpp"
#include "test_util.hpp"

namespace {

using namespace qcc;

std::string message_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

void test_source_spec() {
    section("SourceSpec validation");
    SourceSpec s;  // defaults are the published four-intensity operating point
    s.validate();
    pass("default source spec validates");

    SourceSpec bad = s;
    bad.mu_x = 0.2;  // >= mu_y
    std::string msg = message_of([&] { bad.validate(); });
    REQUIRE(msg.find("mu_x < mu_y violated") != std::string::npos,
            "ordering violation names the constraint, got: " + msg);
    pass("mu_x >= mu_y rejected with the exact message");

    bad = s;
    bad.mu_o = 0.01;
    REQUIRE_THROWS(bad.validate(), validation_error, "nonzero mu_o rejected");
    bad = s;
    bad.mu_z = 0.0;
    REQUIRE_THROWS(bad.validate(), validation_error, "zero mu_z rejected");

    bad = s;
    bad.p_o += 1e-6;  // probabilities no longer sum to 1
    msg = message_of([&] { bad.validate(); });
    REQUIRE(msg.find("p_o") != std::string::npos,
            "probability-sum violation names p_o, got: " + msg);
    pass("probability sum violation names p_o");

    bad = s;
    bad.p_o += 1e-14;  // within the 1e-12 tolerance
    bad.validate();
    pass("1e-14 probability slack tolerated");
}

void test_system_and_pulse() {
    section("SystemModel / PulseModel / AnalysisConfig validation");
    SystemModel m;
    m.validate();
    m.visibility = 0.26;
    REQUIRE_THROWS(m.validate(), validation_error, "visibility > 0.25 rejected");
    m.visibility = -0.01;
    REQUIRE_THROWS(m.validate(), validation_error, "negative visibility rejected");
    m = SystemModel{};
    m.f = 0.99;
    REQUIRE_THROWS(m.validate(), validation_error, "f < 1 rejected");
    m = SystemModel{};
    m.eta_b = 1.2;
    REQUIRE_THROWS(m.validate(), validation_error, "eta > 1 rejected");
    pass("system model field ranges enforced");

    PulseModel p;
    p.validate();
    p.gamma = 0.0;
    REQUIRE_THROWS(p.validate(), validation_error, "gamma <= 0 rejected");
    p = PulseModel{};
    p.dt_ab = 1.0;
    p.dt_ac = 3.0;
    p.dt_bc = 2.0;  // consistent: dt_bc = dt_ac - dt_ab
    p.validate();
    p.dt_bc = 2.5;
    REQUIRE_THROWS(p.validate(), validation_error, "inconsistent delays rejected");
    pass("pairwise delay consistency enforced");

    AnalysisConfig a;
    REQUIRE(a.h_scan_points == 64, "default h_scan_points is 64");
    REQUIRE(a.quadrature_points == 32, "default quadrature_points is 32");
    a.validate();
    a.epsilon = 0.0;
    REQUIRE_THROWS(a.validate(), validation_error, "epsilon = 0 rejected");
    a = AnalysisConfig{};
    a.epsilon = 1.0;
    REQUIRE_THROWS(a.validate(), validation_error, "epsilon = 1 rejected");
    a = AnalysisConfig{};
    a.h_scan_points = 1;
    REQUIRE_THROWS(a.validate(), validation_error, "h_scan_points < 2 rejected");
    a = AnalysisConfig{};
    a.quadrature_points = 7;
    REQUIRE_THROWS(a.validate(), validation_error, "quadrature_points < 8 rejected");
    pass("analysis config defaults and ranges");
}

void test_combo_names() {
    section("combination naming");
    const char* expected[] = {"zzz", "xxx", "yyy", "ooo", "oxx_sym", "xoo_sym",
                              "oyy", "yoy", "yyo", "yoo", "oyo", "ooy"};
    for (int i = 0; i < kComboCount; ++i) {
        const Combo c = static_cast<Combo>(i);
        REQUIRE(std::string(combo_name(c)) == expected[i], "combo name order");
        REQUIRE(combo_from_name(expected[i]) == c, "combo name round trip");
    }
    REQUIRE_THROWS(combo_from_name("zxy"), validation_error,
                   "unknown combination rejected");
    pass("12 combination tokens round-trip");
}

void test_ledger_validation() {
    section("CountLedger validation");
    CountLedger led;
    for (int i = 0; i < kComboCount; ++i)
        led.set(static_cast<Combo>(i), 1e9, 1000 + i);
    led.e_zzz_ab = 10;
    led.e_zzz_ac = 11;
    led.e_zzz_bc = 12;
    led.e_xxx = 400;
    led.e_yyy = 300;
    led.validate();
    pass("well-formed ledger validates");

    CountLedger bad = led;
    bad.set(Combo::yoo, 100.0, 101);
    std::string msg = message_of([&] { bad.validate(); });
    REQUIRE(msg.find("coincidences exceed pulses") != std::string::npos,
            "overflow names the failure, got: " + msg);
    REQUIRE(msg.find("yoo") != std::string::npos, "overflow names the combo");
    pass("coincidences > pulses rejected");

    bad = led;
    bad.e_xxx = bad.m(Combo::xxx) + 1;
    REQUIRE_THROWS(bad.validate(), validation_error,
                   "error count above coincidences rejected");
    pass("error counts bounded by coincidences");
}

void test_config_roundtrip() {
    section("JSON config round-trip");
    const std::string text = R"({
      "source": {"mu_z": 0.1, "mu_x": 0.0281, "mu_y": 0.152, "mu_o": 0.0,
                 "p_z": 0.33, "p_x": 0.51, "p_y": 0.09, "p_o": 0.07},
      "system": {"eta_a": 0.5, "eta_b": 0.5, "eta_c": 0.5, "p_d": 1e-6,
                 "e_d": 0.025, "visibility": 0.25, "f": 1.16},
      "pulse": {"gamma": 1.0, "dt_ab": 0.0, "dt_ac": 0.0, "dt_bc": 0.0,
                "domega_ab": 0.0, "domega_bc": 0.0, "domega_ca": 0.0},
      "analysis": {"epsilon": 1e-10, "h_scan_points": 64, "quadrature_points": 32}
    })";
    Config cfg = parse_config(text);
    REQUIRE(cfg.source.mu_y == 0.152, "mu_y parsed");
    REQUIRE(cfg.system.p_d == 1e-6, "p_d parsed");
    REQUIRE(cfg.analysis.h_scan_points == 64, "h_scan_points parsed");

    const std::string dumped = dump_config(cfg);
    Config cfg2 = parse_config(dumped);
    REQUIRE(dump_config(cfg2) == dumped, "dump(parse(dump)) is a fixed point");
    pass("config round-trips through JSON");

    Config partial = parse_config(R"({"system": {"e_d": 0.0225}})");
    REQUIRE(partial.system.e_d == 0.0225, "partial config overrides e_d");
    REQUIRE(partial.source.mu_z == 0.1, "partial config keeps defaults");
    pass("omitted sections keep defaults");

    REQUIRE_THROWS(parse_config(R"({"source": {"mu_q": 1.0}})"), validation_error,
                   "unknown field rejected");
    REQUIRE_THROWS(parse_config(R"({"source": {"mu_z": "high"}})"), validation_error,
                   "wrong field type rejected");
    REQUIRE_THROWS(parse_config("not json"), validation_error,
                   "malformed JSON rejected");
    REQUIRE_THROWS(parse_config(R"({"source": {"mu_x": 0.3, "mu_y": 0.2}})"),
                   validation_error, "parsed config is validated");
    pass("config rejection paths");
}

void test_counts_csv() {
    section("counts CSV round-trip");
    CountLedger led;
    led.set(Combo::zzz, 7.2e11, 6851252);
    led.set(Combo::xxx, 2.6528e12, 2207217);
    led.set(Combo::yyy, 1.6e10, 1941154);
    led.set(Combo::ooo, 6e9, 0);
    led.set(Combo::oxx_sym, 1.104e12, 237638);
    led.set(Combo::xoo_sym, 1.44e11, 35);
    led.set(Combo::oyy, 8e9, 233950);
    led.set(Combo::yoy, 8e9, 280433);
    led.set(Combo::yyo, 8e9, 261515);
    led.set(Combo::yoo, 8e9, 176);
    led.set(Combo::oyo, 8e9, 5);
    led.set(Combo::ooy, 8e9, 380);
    led.e_zzz_ab = 131751;
    led.e_zzz_ac = 132459;
    led.e_zzz_bc = 150127;
    led.e_xxx = 827635;
    led.e_yyy = 731234;

    const std::string counts_path = "core_model_counts_tmp.csv";
    const std::string errors_path = "core_model_errors_tmp.csv";
    write_counts(led, counts_path);
    write_errors(led, errors_path);

    CountLedger loaded = load_counts(counts_path);
    apply_errors(loaded, errors_path);
    for (int i = 0; i < kComboCount; ++i) {
        const Combo c = static_cast<Combo>(i);
        REQUIRE(loaded.n(c) == led.n(c), "pulse counts survive round trip");
        REQUIRE(loaded.m(c) == led.m(c), "coincidences survive round trip");
    }
    REQUIRE(loaded.e_zzz_bc == led.e_zzz_bc, "pair errors survive round trip");
    REQUIRE(loaded.e_xxx == led.e_xxx, "xxx errors survive round trip");
    REQUIRE(format_counts(loaded) == format_counts(led),
            "canonical counts file is byte-stable");
    REQUIRE(format_errors(loaded) == format_errors(led),
            "canonical errors file is byte-stable");
    pass("counts/errors CSV round-trip bytes");

    std::ofstream(counts_path) << "combo,pulses\nzzz,1,2\n";
    REQUIRE_THROWS(load_counts(counts_path), validation_error,
                   "wrong header rejected");
    std::ofstream(counts_path)
        << "combo,pulses,coincidences\nzzz,100,5\nzzz,100,5\n";
    REQUIRE_THROWS(load_counts(counts_path), validation_error,
                   "duplicate row rejected");
    std::ofstream(counts_path) << "combo,pulses,coincidences\nzzz,100,5\n";
    REQUIRE_THROWS(load_counts(counts_path), validation_error,
                   "missing combinations rejected");
    std::ofstream(counts_path)
        << format_counts(led).substr(0, 40) << "garbage,not,number\n";
    REQUIRE_THROWS(load_counts(counts_path), validation_error,
                   "malformed row rejected");
    pass("counts CSV rejection paths");

    std::remove(counts_path.c_str());
    std::remove(errors_path.c_str());
}

}  // namespace

int main() {
    test_source_spec();
    test_system_and_pulse();
    test_combo_names();
    test_ledger_validation();
    test_config_roundtrip();
    test_counts_csv();
    std::cout << "\nall core-model checks passed\n";
    return 0;
}
