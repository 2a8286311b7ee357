#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace widthforge {

// Error category, mirrored by the C API status codes.
enum class ErrorKind {
    parse,       // malformed input text
    invalid,     // argument violates a precondition
    cap,         // size cap exceeded (brute-force / exact-search limits)
    mismatch,    // validation failed against a target object
    io,          // file system problem
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &msg) {
    throw Error(kind, msg);
}

// Hard cap for all brute-force semantic operations: 2^24 rows fit in 2 MiB.
constexpr int kBruteForceVarCap = 24;
// Hard cap for the exact treewidth search.
constexpr int kExactTreewidthCap = 25;

inline int ceil_log2(std::uint64_t n) {
    int b = 0;
    while ((std::uint64_t(1) << b) < n) ++b;
    return b;
}

} // namespace widthforge
