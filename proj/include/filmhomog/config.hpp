#pragma once

#include "filmhomog/study.hpp"

#include <string>

namespace filmhomog {

struct ScenarioConfig {
    Scenario scenario;
    std::string output_dir = "out";
    /// the input re-serialized with sorted keys and no whitespace
    std::string canonical;
    /// FNV-1a 64-bit hash of `canonical`, 16 hex digits
    std::string hash;
};

/// Parses a JSON scenario. Throws ParseError for malformed input and
/// ValidationError listing every violated constraint.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config(const std::string& path);

std::string fnv1a_hex(const std::string& data);

}  // namespace filmhomog
