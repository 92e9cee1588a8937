#pragma once

#include <stdexcept>
#include <string>

namespace coop {

enum class ErrorKind { usage, parse, model, io };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct UsageError : Error {
    explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

struct ParseError : Error {
    ParseError(const std::string& source, int line, const std::string& what)
        : Error(ErrorKind::parse, source + ":" + std::to_string(line) + ": " + what), line_(line) {}
    explicit ParseError(const std::string& what) : Error(ErrorKind::parse, what) {}
    int line() const noexcept { return line_; }

private:
    int line_ = 0;
};

// Domain or invariant violation in model inputs or results.
struct ModelError : Error {
    explicit ModelError(const std::string& what) : Error(ErrorKind::model, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

inline int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::usage: return 2;
    case ErrorKind::parse: return 3;
    case ErrorKind::model: return 4;
    case ErrorKind::io: return 5;
    }
    return 1;
}

inline const char* category_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::usage: return "usage error";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::model: return "model error";
    case ErrorKind::io: return "i/o error";
    }
    return "error";
}

namespace detail {

inline void require(bool ok, const std::string& message) {
    if (!ok) throw ModelError(message);
}

} // namespace detail
} // namespace coop
