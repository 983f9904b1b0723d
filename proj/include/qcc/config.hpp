#pragma once
// JSON configuration loading: {"source": {...}, "system": {...},
// "pulse": {...}, "analysis": {...}}, all fields snake_case, omitted
// sections/fields keep their defaults.

#include <string>

#include "qcc/types.hpp"

namespace qcc {

struct Config {
    SourceSpec source;
    SystemModel system;
    PulseModel pulse;
    AnalysisConfig analysis;
};

Config load_config(const std::string& path);
Config parse_config(const std::string& json_text);  // exposed for tests
std::string dump_config(const Config& cfg);

}  // namespace qcc
