#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ailc {

enum class DisturbanceKind {
    none,
    uniform,          ///< U[low, high]
    gaussian,         ///< N(mean, var); `var` is a variance unless sigma_is_std
    bernoulli,        ///< value1 w.p. prob1, value2 w.p. 1-prob1
    trigonometric,    ///< c1*sin(k*pi*t/d1) + c2*cos(k*pi*t/d2)
    hoim,             ///< w_k = a1*w_{k-1} + a2*w_{k-2}, seeded by w1, w2
    state_dependent,  ///< c1*x - c2*sin(pi*x)
    example2_channel, ///< benchmark-2 channel disturbance, channel in {1, 2}
};

struct DisturbanceSpec {
    DisturbanceKind kind = DisturbanceKind::none;
    std::uint64_t seed = 0;
    int channel = 0; ///< salt for per-channel substreams; also selects example2 form

    // uniform
    double low = -0.01, high = 0.01;
    // gaussian
    double mean = 0.0, var = 0.01;
    bool sigma_is_std = false; ///< reinterpret sqrt(var) source value as sigma
    // bernoulli
    double value1 = 0.03, prob1 = 0.3, value2 = -0.01;
    // trigonometric
    double c1 = 0.01, d1 = 50.0, c2 = 0.006, d2 = 2.0;
    // hoim
    double a1 = 5.0 / 3.0, a2 = -2.0 / 3.0, w1 = 0.02, w2 = -0.02;
    // state_dependent
    double sd_lin = 0.01, sd_sin = 0.01;
};

const char* to_string(DisturbanceKind kind);

/// Draws w_k(t). Stateless kinds are pure functions of (seed, k, t, x); the
/// hoim kind keeps per-t memory of the two previous iterations and therefore
/// requires k to advance one at a time (re-querying the current k is fine).
class DisturbanceStream {
public:
    DisturbanceStream() = default;
    explicit DisturbanceStream(DisturbanceSpec spec) : spec_(std::move(spec)) {}

    double sample(int k, int t, double x_current);

    const DisturbanceSpec& spec() const { return spec_; }
    /// Largest |w| drawn so far (boundedness audit).
    double observed_sup() const { return observed_sup_; }

private:
    struct HoimCell {
        int last_k = 0;
        double prev = 0.0;  ///< w_{k-1}
        double prev2 = 0.0; ///< w_{k-2}
        double current = 0.0;
    };

    DisturbanceSpec spec_;
    std::vector<HoimCell> hoim_;
    double observed_sup_ = 0.0;
};

}  // namespace ailc
