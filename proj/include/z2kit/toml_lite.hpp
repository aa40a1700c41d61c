#pragma once

#include "json.hpp"

#include <string>

namespace z2kit {

using Json = nlohmann::ordered_json;

// Reads the TOML subset used by model files (tables, arrays of tables, inline
// tables, arrays, strings, integers, floats, booleans, comments) into JSON.
// Anything outside the subset raises InvalidSpec with a line number.
Json parse_toml(const std::string& text);

}  // namespace z2kit
