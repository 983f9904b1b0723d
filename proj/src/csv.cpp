#include "qcc/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace qcc {

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& context) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw validation_error("counts: bad number '" + s + "' in " + context);
    }
}

std::uint64_t parse_count(const std::string& s, const std::string& context) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw validation_error("counts: bad integer '" + s + "' in " + context);
    return v;
}

}  // namespace

CountLedger load_counts(const std::string& counts_path) {
    std::ifstream in(counts_path);
    if (!in) throw validation_error("counts: cannot open " + counts_path);

    CountLedger ledger;
    std::array<bool, kComboCount> seen{};
    std::string line;
    bool first = true;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (first) {
            first = false;
            if (fields.size() == 3 && fields[0] == "combo" && fields[1] == "pulses" &&
                fields[2] == "coincidences")
                continue;  // header
            throw validation_error("counts: expected header combo,pulses,coincidences");
        }
        if (fields.size() != 3)
            throw validation_error("counts: line " + std::to_string(line_no) +
                                   " must have 3 fields");
        Combo c = combo_from_name(fields[0]);
        double n = parse_double(fields[1], "line " + std::to_string(line_no));
        std::uint64_t m = parse_count(fields[2], "line " + std::to_string(line_no));
        if (seen[static_cast<int>(c)])
            throw validation_error("counts: duplicate row for " + fields[0]);
        seen[static_cast<int>(c)] = true;
        ledger.set(c, n, m);
    }
    for (int i = 0; i < kComboCount; ++i) {
        if (!seen[i])
            throw validation_error(std::string("counts: missing combination row ") +
                                   combo_name(static_cast<Combo>(i)));
    }
    ledger.validate();
    return ledger;
}

void apply_errors(CountLedger& ledger, const std::string& errors_path) {
    std::ifstream in(errors_path);
    if (!in) throw validation_error("errors: cannot open " + errors_path);

    std::string line;
    bool first = true;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (first) {
            first = false;
            if (fields.size() == 3 && fields[0] == "combo" && fields[1] == "pair" &&
                fields[2] == "errors")
                continue;
            throw validation_error("errors: expected header combo,pair,errors");
        }
        if (fields.size() != 3)
            throw validation_error("errors: line " + std::to_string(line_no) +
                                   " must have 3 fields");
        const std::string& combo = fields[0];
        const std::string& pair = fields[1];
        std::uint64_t e = parse_count(fields[2], "line " + std::to_string(line_no));
        if (combo == "zzz" && pair == "ab") ledger.e_zzz_ab = e;
        else if (combo == "zzz" && pair == "ac") ledger.e_zzz_ac = e;
        else if (combo == "zzz" && pair == "bc") ledger.e_zzz_bc = e;
        else if (combo == "xxx" && pair == "all") ledger.e_xxx = e;
        else if (combo == "yyy" && pair == "all") ledger.e_yyy = e;
        else
            throw validation_error("errors: unsupported row " + combo + "," + pair);
    }
    ledger.validate();
}

std::string format_counts(const CountLedger& ledger) {
    std::ostringstream out;
    out << "combo,pulses,coincidences\n";
    for (int i = 0; i < kComboCount; ++i) {
        const auto c = static_cast<Combo>(i);
        out << combo_name(c) << ',' << format_double(ledger.n(c)) << ','
            << ledger.m(c) << '\n';
    }
    return out.str();
}

std::string format_errors(const CountLedger& ledger) {
    std::ostringstream out;
    out << "combo,pair,errors\n";
    out << "zzz,ab," << ledger.e_zzz_ab << '\n';
    out << "zzz,ac," << ledger.e_zzz_ac << '\n';
    out << "zzz,bc," << ledger.e_zzz_bc << '\n';
    out << "xxx,all," << ledger.e_xxx << '\n';
    out << "yyy,all," << ledger.e_yyy << '\n';
    return out.str();
}

namespace {
void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot open for writing: " + path);
    out << text;
}
}  // namespace

void write_counts(const CountLedger& ledger, const std::string& path) {
    write_file(path, format_counts(ledger));
}

void write_errors(const CountLedger& ledger, const std::string& path) {
    write_file(path, format_errors(ledger));
}

}  // namespace qcc
