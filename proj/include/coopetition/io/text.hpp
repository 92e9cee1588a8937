#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "coopetition/error.hpp"

namespace coop::io {

struct Line {
    std::string text;  // trimmed, comments removed
    int number = 0;
};

struct Section {
    std::string name;
    int number = 0;
    std::vector<Line> lines;
};

struct Document {
    std::string source;
    std::vector<Section> sections;

    std::vector<const Section*> named(std::string_view name) const {
        std::vector<const Section*> out;
        for (const auto& s : sections)
            if (s.name == name) out.push_back(&s);
        return out;
    }
};

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

namespace detail {

// Drop a '#' comment unless it sits inside double quotes.
inline std::string_view strip_comment(std::string_view s) {
    bool quoted = false;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] == '"') quoted = !quoted;
        else if (s[k] == '#' && !quoted) return s.substr(0, k);
    }
    return s;
}

} // namespace detail

inline Document parse_document(std::string_view text, const std::string& source) {
    Document doc{source, {}};
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        ++number;
        const std::string_view line = trim(detail::strip_comment(text.substr(pos, end - pos)));
        pos = end + 1;
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) throw ParseError(source, number, "malformed section header");
            doc.sections.push_back({std::string(trim(line.substr(1, line.size() - 2))), number, {}});
            continue;
        }
        if (doc.sections.empty()) throw ParseError(source, number, "content before the first section header");
        doc.sections.back().lines.push_back({std::string(line), number});
    }
    return doc;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
    return ss.str();
}

struct Assignment {
    std::string key;
    std::string value;
    int line = 0;
};

inline Assignment split_assignment(const Line& line, const std::string& source) {
    const auto eq = line.text.find('=');
    if (eq == std::string::npos) throw ParseError(source, line.number, "expected 'key = value'");
    Assignment a{std::string(trim(std::string_view(line.text).substr(0, eq))),
                 std::string(trim(std::string_view(line.text).substr(eq + 1))), line.number};
    if (a.key.empty()) throw ParseError(source, line.number, "missing key before '='");
    return a;
}

// Whitespace-separated key=value tokens; values may be double-quoted.
inline std::vector<Assignment> split_tokens(const Line& line, const std::string& source) {
    std::vector<Assignment> out;
    const std::string& s = line.text;
    std::size_t k = 0;
    while (k < s.size()) {
        while (k < s.size() && (s[k] == ' ' || s[k] == '\t')) ++k;
        if (k == s.size()) break;
        const std::size_t eq = s.find('=', k);
        if (eq == std::string::npos) throw ParseError(source, line.number, "expected key=value token");
        Assignment a;
        a.key = std::string(trim(std::string_view(s).substr(k, eq - k)));
        a.line = line.number;
        if (a.key.empty() || a.key.find_first_of(" \t\"") != std::string::npos)
            throw ParseError(source, line.number, "malformed token key");
        k = eq + 1;
        if (k < s.size() && s[k] == '"') {
            const std::size_t close = s.find('"', k + 1);
            if (close == std::string::npos) throw ParseError(source, line.number, "unterminated quoted value");
            a.value = s.substr(k + 1, close - k - 1);
            k = close + 1;
        } else {
            const std::size_t stop = s.find_first_of(" \t", k);
            a.value = s.substr(k, stop == std::string::npos ? std::string::npos : stop - k);
            k = stop == std::string::npos ? s.size() : stop;
        }
        out.push_back(std::move(a));
    }
    return out;
}

inline std::string unquote(const std::string& value, const std::string& source, int line) {
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        std::string inner = value.substr(1, value.size() - 2);
        if (inner.find('"') != std::string::npos) throw ParseError(source, line, "stray quote in value");
        return inner;
    }
    if (value.find('"') != std::string::npos) throw ParseError(source, line, "unbalanced quote in value");
    return value;
}

inline double parse_double(std::string_view s, const std::string& source, int line, std::string_view field) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError(source, line, "field '" + std::string(field) + "': expected a number, got '" + std::string(s) + "'");
    return x;
}

inline long long parse_integer(std::string_view s, const std::string& source, int line, std::string_view field) {
    s = trim(s);
    long long x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError(source, line, "field '" + std::string(field) + "': expected an integer, got '" + std::string(s) + "'");
    return x;
}

inline std::vector<double> parse_doubles(std::string_view s, const std::string& source, int line, std::string_view field) {
    std::vector<double> out;
    std::size_t k = 0;
    while (k < s.size()) {
        const std::size_t b = s.find_first_not_of(" \t,", k);
        if (b == std::string_view::npos) break;
        const std::size_t e = std::min(s.find_first_of(" \t,", b), s.size());
        out.push_back(parse_double(s.substr(b, e - b), source, line, field));
        k = e;
    }
    if (out.empty()) throw ParseError(source, line, "field '" + std::string(field) + "': expected at least one number");
    return out;
}

// Shortest text that parses back to the same double.
inline std::string format_exact(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

inline std::string format_exact(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? " " : "") + format_exact(xs[k]);
    return out;
}

} // namespace coop::io
