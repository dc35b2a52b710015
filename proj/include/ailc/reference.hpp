#pragma once

#include <cmath>

#include "ailc/types.hpp"

// Built-in reference families. All are evaluated at the absolute time index i
// (the target of control step t is r_k(t+rho)).

namespace ailc::refs {

/// Invariant-then-alternating: 0.8 sin(2 pi i / 25) while k <= 10 or k even,
/// 1.2 cos(2 pi i / 25) for odd k > 10.
inline RefFn example1_compare() {
    return [](int k, int i) {
        if (k <= 10 || k % 2 == 0) return 0.8 * std::sin(2.0 * M_PI * i / 25.0);
        return 1.2 * std::cos(2.0 * M_PI * i / 25.0);
    };
}

/// Iteration-alternating sine / square: odd k tracks 0.8 sin(2 pi i / 25),
/// even k tracks the square wave 0.5 + 0.5 (-1)^floor(i/20).
inline RefFn example1_alternating() {
    return [](int k, int i) {
        if (k % 2 == 1) return 0.8 * std::sin(2.0 * M_PI * i / 25.0);
        return 0.5 + 0.5 * ((i / 20) % 2 == 0 ? 1.0 : -1.0);
    };
}

/// 0.1 sin(2 pi i / 25), iteration-invariant.
inline RefFn example2_sine() {
    return [](int, int i) { return 0.1 * std::sin(2.0 * M_PI * i / 25.0); };
}

inline RefFn constant(double value) {
    return [value](int, int) { return value; };
}

inline RefFn sine(double amplitude, double period, double phase = 0.0, double offset = 0.0) {
    return [=](int, int i) { return offset + amplitude * std::sin(2.0 * M_PI * i / period + phase); };
}

inline RefFn square(double amplitude, double half_period, double offset = 0.0) {
    return [=](int, int i) {
        return offset + amplitude * ((i / static_cast<int>(half_period)) % 2 == 0 ? 1.0 : -1.0);
    };
}

}  // namespace ailc::refs
