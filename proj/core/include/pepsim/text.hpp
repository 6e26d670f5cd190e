#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pepsim {

// Shortest decimal representation that round-trips to the same double.
// All numeric file output goes through this so reruns are byte-identical.
std::string format_double(double x);

// Strict scalar parsers; `context` names the offending key/line in errors.
double parse_double(std::string_view text, const std::string& context);
std::uint64_t parse_u64(std::string_view text, const std::string& context);
std::int64_t parse_i64(std::string_view text, const std::string& context);
bool parse_bool(std::string_view text, const std::string& context);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

struct KeyValueLine {
  std::string key;
  std::string value;
  int line_number = 0;
};

// Flat `key = value` structured text: one pair per line, `#` starts a comment
// (full-line or trailing), blank lines ignored. Malformed lines throw with the
// line number and source label.
std::vector<KeyValueLine> parse_key_value_text(std::string_view text,
                                               const std::string& source_label);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace pepsim
