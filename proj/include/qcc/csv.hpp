#pragma once
// Count-ledger CSV serialization.
//
// Counts file:  header `combo,pulses,coincidences`, one row per combination
//               token (zzz, xxx, yyy, ooo, oxx_sym, xoo_sym, oyy, yoy, yyo,
//               yoo, oyo, ooy), pulses as shortest round-trip decimal,
//               coincidences as integers.
// Errors file:  header `combo,pair,errors`, pair in {ab,ac,bc,all}; `all`
//               carries the xxx/yyy totals (their errors are not pairwise).
//
// write_* emit rows in the fixed combination order above, so writing a loaded
// canonical file reproduces it byte for byte.

#include <string>

#include "qcc/types.hpp"

namespace qcc {

CountLedger load_counts(const std::string& counts_path);
void apply_errors(CountLedger& ledger, const std::string& errors_path);

std::string format_counts(const CountLedger& ledger);
std::string format_errors(const CountLedger& ledger);
void write_counts(const CountLedger& ledger, const std::string& path);
void write_errors(const CountLedger& ledger, const std::string& path);

// Shortest decimal representation that parses back to exactly this value.
std::string format_double(double v);

}  // namespace qcc
