#include "ailc/disturbances.hpp"

#include <cmath>
#include <string>

#include "ailc/errors.hpp"
#include "ailc/rng.hpp"

namespace ailc {

const char* to_string(DisturbanceKind kind) {
    switch (kind) {
        case DisturbanceKind::none: return "none";
        case DisturbanceKind::uniform: return "uniform";
        case DisturbanceKind::gaussian: return "gaussian";
        case DisturbanceKind::bernoulli: return "bernoulli";
        case DisturbanceKind::trigonometric: return "trigonometric";
        case DisturbanceKind::hoim: return "hoim";
        case DisturbanceKind::state_dependent: return "state_dependent";
        case DisturbanceKind::example2_channel: return "example2_channel";
    }
    return "?";
}

double DisturbanceStream::sample(int k, int t, double x_current) {
    if (k < 1) throw ConfigError("disturbance sample: k must be >= 1");
    if (t < 0) throw ConfigError("disturbance sample: t must be >= 0");

    const std::uint64_t stream = rng::channel_stream(rng::kStreamDisturbance, spec_.channel);
    double w = 0.0;
    switch (spec_.kind) {
        case DisturbanceKind::none:
            w = 0.0;
            break;
        case DisturbanceKind::uniform:
            w = rng::uniform(spec_.seed, stream, static_cast<std::uint64_t>(k),
                             static_cast<std::uint64_t>(t), spec_.low, spec_.high);
            break;
        case DisturbanceKind::gaussian: {
            // `var` is a variance by default; with sigma_is_std the configured
            // number is already a standard deviation.
            const double sigma = spec_.sigma_is_std ? spec_.var : std::sqrt(spec_.var);
            w = spec_.mean + sigma * rng::gaussian(spec_.seed, stream, static_cast<std::uint64_t>(k),
                                                   static_cast<std::uint64_t>(t));
            break;
        }
        case DisturbanceKind::bernoulli: {
            const double p = rng::unit(spec_.seed, stream, static_cast<std::uint64_t>(k),
                                       static_cast<std::uint64_t>(t));
            w = (p < spec_.prob1) ? spec_.value1 : spec_.value2;
            break;
        }
        case DisturbanceKind::trigonometric:
            w = spec_.c1 * std::sin(k * M_PI * t / spec_.d1) +
                spec_.c2 * std::cos(k * M_PI * t / spec_.d2);
            break;
        case DisturbanceKind::hoim: {
            if (hoim_.size() <= static_cast<std::size_t>(t)) hoim_.resize(t + 1);
            HoimCell& cell = hoim_[static_cast<std::size_t>(t)];
            if (k == cell.last_k) {
                w = cell.current;
                break;
            }
            if (k != cell.last_k + 1)
                throw SequencingError("hoim disturbance: iteration " + std::to_string(k) +
                                      " requested at t=" + std::to_string(t) + " but memory is at " +
                                      std::to_string(cell.last_k));
            if (k == 1) w = spec_.w1;
            else if (k == 2) w = spec_.w2;
            else w = spec_.a1 * cell.prev + spec_.a2 * cell.prev2;
            cell.prev2 = cell.prev;
            cell.prev = w;
            cell.current = w;
            cell.last_k = k;
            break;
        }
        case DisturbanceKind::state_dependent:
            w = spec_.sd_lin * x_current - spec_.sd_sin * std::sin(M_PI * x_current);
            break;
        case DisturbanceKind::example2_channel: {
            if (spec_.channel == 1)
                w = 1e-4 * std::cos(k * t * M_PI) + 1e-4 * std::sin(k * t * M_PI / 2.0);
            else if (spec_.channel == 2)
                w = 1e-4 * std::cos(2.0 * k * t * M_PI) + 1e-4 * std::sin(k * t * M_PI);
            else
                throw ConfigError("example2_channel disturbance: channel must be 1 or 2");
            break;
        }
    }

    observed_sup_ = std::max(observed_sup_, std::abs(w));
    return w;
}

}  // namespace ailc
