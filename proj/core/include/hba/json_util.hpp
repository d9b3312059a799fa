#pragma once

// JSON helpers shared by config loading and record files.

#include <cstddef>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

namespace hba {

// 1-based line of every value in `text`, keyed by JSON pointer ("" is the
// root). `text` must already be valid JSON.
std::map<std::string, std::size_t> json_value_lines(const std::string& text);

// Parses `text`; on malformed input throws ConfigError naming the byte offset
// and line of the failure, prefixed by `what` (usually a file name).
nlohmann::json parse_json_text(const std::string& text, const std::string& what);

// Reads a whole file; throws Error if it cannot be opened.
std::string read_text_file(const std::string& path);

// Shortest round-trip decimal for a double, independent of the C locale.
std::string format_double(double value);

}  // namespace hba
