#pragma once

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "coopetition/error.hpp"

namespace coop::io {

// 9 significant digits, '.' decimal point, independent of the C locale.
inline std::string format_csv(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 9);
    return std::string(buf, r.ptr);
}

class CsvWriter {
public:
    explicit CsvWriter(std::span<const std::string_view> header) : columns_(header.size()) {
        bool first = true;
        for (auto h : header) {
            if (!first) out_ += ',';
            out_ += h;
            first = false;
        }
        out_ += '\n';
    }

    CsvWriter& cell(std::string_view s) {
        sep();
        if (s.find_first_of(",\"\n") != std::string_view::npos) {
            out_ += '"';
            for (char c : s) {
                if (c == '"') out_ += '"';
                out_ += c;
            }
            out_ += '"';
        } else {
            out_ += s;
        }
        return *this;
    }
    CsvWriter& cell(const char* s) { return cell(std::string_view(s)); }
    CsvWriter& cell(const std::string& s) { return cell(std::string_view(s)); }
    CsvWriter& cell(double x) { return cell(std::string_view(format_csv(x))); }
    CsvWriter& cell(std::size_t x) { return cell(std::string_view(std::to_string(x))); }
    CsvWriter& cell(int x) { return cell(std::string_view(std::to_string(x))); }
    CsvWriter& cell(bool b) { return cell(std::string_view(b ? "true" : "false")); }

    void end_row() {
        if (filled_ != columns_) throw ModelError("csv row has " + std::to_string(filled_) + " cells, expected " + std::to_string(columns_));
        out_ += '\n';
        filled_ = 0;
        ++rows_;
    }

    std::size_t rows() const noexcept { return rows_; }
    const std::string& str() const noexcept { return out_; }

private:
    void sep() {
        if (filled_++ > 0) out_ += ',';
    }

    std::size_t columns_;
    std::size_t filled_ = 0;
    std::size_t rows_ = 0;
    std::string out_;
};

// Write to a sibling temporary and rename over the target.
inline void write_atomic(const std::filesystem::path& path, std::string_view content) {
    static std::atomic<unsigned> counter{0};
    auto tmp = path;
    tmp += ".tmp" + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot create '" + tmp.string() + "'");
        out.write(content.data(), std::streamsize(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("cannot write '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into place at '" + path.string() + "'");
    }
}

// Artifacts are staged in memory and only written once every one is ready.
class OutputSet {
public:
    void add(const std::string& name, std::string content) { files_[name] = std::move(content); }
    bool contains(const std::string& name) const { return files_.contains(name); }
    const std::string& at(const std::string& name) const { return files_.at(name); }
    const std::map<std::string, std::string>& files() const noexcept { return files_; }

    void commit(const std::filesystem::path& dir) const {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
        for (const auto& [name, content] : files_) write_atomic(dir / name, content);
    }

private:
    std::map<std::string, std::string> files_;
};

} // namespace coop::io
