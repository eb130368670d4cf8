#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tradeoff/estimation.hpp"

namespace tradeoff::cli {

using nlohmann::json;

inline constexpr const char* kEngineVersion = "tradeoff 0.1.0";

struct Dataset {
    std::vector<std::string> ids;
    ChoiceDataset data;
};

Domain parse_domain(const std::string& name);

/// CSV with a header row; schema depends on the domain. Errors name the 1-based line.
Dataset parse_dataset(std::istream& in, Domain domain);
Dataset read_dataset(const std::string& path, Domain domain);

/// 17 significant digits; round-trips through strtod.
std::string fmt(double v);

json load_config(const std::string& path);

/// FNV-1a over the compact dump of `config` (object keys are sorted).
std::string config_hash(const json& config);

/// {"engine", "seed", "config_hash", "config"} as one compact JSON document.
json metadata(const json& config, std::uint64_t seed);
/// CSV header comment: "# " followed by the metadata document.
std::string metadata_line(const json& config, std::uint64_t seed);
json parse_metadata_line(const std::string& line);

/// Temp file in the destination directory, then rename. Empty path or "-" writes stdout.
void write_output(const std::string& path, const std::string& content);

}  // namespace tradeoff::cli
