#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace relq {

// Plain-text "key = value" configuration. '#' starts a comment line, blank
// lines are ignored, later keys override earlier ones.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values(const std::filesystem::path& path);

std::string trim(std::string_view text);

// Splits on `sep` and trims each piece; empty input gives an empty list.
std::vector<std::string> split_list(std::string_view text, char sep = ',');

std::vector<double> parse_double_list(std::string_view text);
std::vector<std::size_t> parse_size_list(std::string_view text);
bool parse_bool(std::string_view text);

} // namespace relq
