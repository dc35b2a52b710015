#pragma once

#include <stdexcept>
#include <string>

namespace ailc {

/// Invalid configuration or argument values detected up front (bad gains,
/// malformed scenario documents, out-of-range solver settings).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A read or update arrived out of causal order (unset state entry,
/// skipped iteration index in a memoryful disturbance stream).
class SequencingError : public std::logic_error {
public:
    explicit SequencingError(const std::string& msg) : std::logic_error(msg) {}
};

/// Non-finite value produced while rolling a plant or iterating the input
/// solver. Carries the (k, t) location and the offending input.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& msg, int k, int t, double u)
        : std::runtime_error(msg + " (k=" + std::to_string(k) + ", t=" + std::to_string(t) +
                             ", u=" + std::to_string(u) + ")"),
          k(k), t(t), u(u) {}

    int k = 0;
    int t = 0;
    double u = 0.0;
};

/// The root oracle could not establish a sign change even after automatic
/// bracket expansion.
class BracketingError : public std::runtime_error {
public:
    explicit BracketingError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File output failed.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ailc
