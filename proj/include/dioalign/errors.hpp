#pragma once

#include <stdexcept>
#include <string>

namespace dioalign {

// Raised when an adaptive-precision comparison cannot be certified below the
// working-precision cap. Exact representations never raise this.
struct PrecisionCapError : std::runtime_error {
    explicit PrecisionCapError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an enumeration box exceeds the configured work limit.
struct WorkLimitError : std::runtime_error {
    explicit WorkLimitError(const std::string& what) : std::runtime_error(what) {}
};

struct DivergentSeriesError : std::runtime_error {
    explicit DivergentSeriesError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid arguments, malformed grammar, bad model parameters.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Process exit codes used by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitPrecisionCap = 3;
inline constexpr int kExitWorkLimit = 4;
inline constexpr int kExitIo = 5;

// Default adaptive-precision cap (bits) and enumeration work limit (box points).
inline constexpr unsigned kDefaultPrecisionCap = 4096;
inline constexpr long long kDefaultWorkLimit = 100'000'000;

}  // namespace dioalign
