#include "relq/keyvalue.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace relq {

std::string trim(std::string_view text) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    auto b = std::find_if_not(text.begin(), text.end(), is_space);
    auto e = std::find_if_not(text.rbegin(), std::string_view::reverse_iterator(b), is_space).base();
    return std::string(b, e);
}

KeyValues parse_key_values(std::istream& in) {
    KeyValues out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(std::string_view(t).substr(0, eq));
        if (key.empty()) {
            throw std::runtime_error("config line " + std::to_string(line_no) + ": empty key");
        }
        out[key] = trim(std::string_view(t).substr(eq + 1));
    }
    return out;
}

KeyValues read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path.string());
    }
    return parse_key_values(in);
}

std::vector<std::string> split_list(std::string_view text, char sep) {
    std::vector<std::string> out;
    if (trim(text).empty()) {
        return out;
    }
    std::size_t start = 0;
    for (;;) {
        auto pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

namespace {

template <typename T>
T parse_number(const std::string& s) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    return value;
}

} // namespace

std::vector<double> parse_double_list(std::string_view text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        out.push_back(parse_number<double>(item));
    }
    return out;
}

std::vector<std::size_t> parse_size_list(std::string_view text) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(text)) {
        out.push_back(parse_number<std::size_t>(item));
    }
    return out;
}

bool parse_bool(std::string_view text) {
    std::string t = trim(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "yes" || t == "1") {
        return true;
    }
    if (t == "false" || t == "no" || t == "0") {
        return false;
    }
    throw std::invalid_argument("not a boolean: '" + std::string(text) + "'");
}

} // namespace relq
