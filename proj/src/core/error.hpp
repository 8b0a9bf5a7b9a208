#pragma once

#include <stdexcept>
#include <string>

namespace areaflow {

// Error classes mirror the C API status codes.
enum class errc {
    io = 1,        // missing/unreadable/unwritable file
    parse = 2,     // malformed input data
    invalid = 3,   // bad argument or configuration
    state = 4,     // operation not valid in the current state
    analysis = 5,  // degenerate analysis input (empty area, zero variance, ...)
};

class error : public std::runtime_error {
public:
    error(errc kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    errc kind() const { return kind_; }

private:
    errc kind_;
};

[[noreturn]] inline void throw_io(const std::string& msg) { throw error(errc::io, msg); }
[[noreturn]] inline void throw_invalid(const std::string& msg) { throw error(errc::invalid, msg); }
[[noreturn]] inline void throw_analysis(const std::string& msg) { throw error(errc::analysis, msg); }

// Parse failures always name the source ("file:line: what") so callers can
// surface actionable messages.
[[noreturn]] inline void throw_parse(const std::string& source, std::size_t line, const std::string& what) {
    throw error(errc::parse, source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace areaflow
