#pragma once

#include <stdexcept>
#include <string>

namespace dsf {

/// Successor search exceeded the configured radius cap.
struct SearchExhaustedError : std::runtime_error {
    explicit SearchExhaustedError(const std::string& what) : std::runtime_error(what) {}
};

/// Brute-force oracle window contained no open forward vertex.
struct OracleWindowError : std::runtime_error {
    explicit OracleWindowError(const std::string& what) : std::runtime_error(what) {}
};

/// A least-squares fit has no defined answer (degenerate input).
struct FitUndefinedError : std::runtime_error {
    explicit FitUndefinedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dsf
