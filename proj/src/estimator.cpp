#include "ailc/estimator.hpp"

#include <string>
#include <vector>

#include "ailc/errors.hpp"

namespace ailc {

namespace detail {

std::vector<Vector> estimate_chain(std::span<ChainChannel> channels, int t) {
    if (channels.empty()) throw ConfigError("estimate_chain: no channels");
    const int rho = channels[0].rho;
    for (const ChainChannel& ch : channels)
        if (ch.rho != rho) throw ConfigError("estimate_chain: channels disagree on rho");
    if (t < 0) throw SequencingError("estimate_chain: t must be >= 0");

    const std::size_t n = channels.size();

    // est[c][j-1] = x^_c(t+j | t) for level j = 1..rho-1
    std::vector<std::vector<double>> est(n, std::vector<double>(std::max(rho - 1, 0), 0.0));

    // Resolve index i of channel c: measured at or below t, level estimate above.
    auto value = [&](std::size_t c, int i) -> double {
        if (i <= t) return channels[c].measured(i);
        return est[c][static_cast<std::size_t>(i - t - 1)];
    };
    auto window = [&](std::size_t c, int tau) {
        Vector X(rho);
        for (int i = 0; i < rho; ++i) X(i) = value(c, tau + rho - 1 - i);
        return X;
    };

    // Levels advance together across channels so that cross-channel reads of
    // index t+j-1 and below are already resolved when level j is computed.
    for (int j = 1; j <= rho - 1; ++j) {
        const int idx = t + j;
        for (std::size_t c = 0; c < n; ++c) {
            if (idx <= rho - 1) {
                // Known initial state (also the only reachable case when the
                // recursion time tau = t - rho + j would be negative).
                est[c][static_cast<std::size_t>(j - 1)] = channels[c].measured(idx);
                continue;
            }
            const int tau = t - rho + j;
            const Vector x_own = window(c, tau);
            Vector x_cross(0);
            if (n == 2) x_cross = window(1 - c, tau);
            est[c][static_cast<std::size_t>(j - 1)] =
                channels[c].model(tau, x_own, x_cross, channels[c].input(tau));
        }
    }

    std::vector<Vector> out(n);
    for (std::size_t c = 0; c < n; ++c) out[c] = window(c, t);
    return out;
}

}  // namespace detail

Vector estimate_state_vector(const EstimatorMemory& mem, int t) {
    if (mem.rho < 1) throw ConfigError("estimate_state_vector: rho must be >= 1");
    if (t < 0) throw SequencingError("estimate_state_vector: t must be >= 0");
    if (!mem.regressor && mem.rho > 1)
        throw ConfigError("estimate_state_vector: regressor is required for rho > 1");

    const int measured_hi = std::max(t, mem.rho - 1);

    detail::ChainChannel ch;
    ch.rho = mem.rho;
    ch.measured = [&mem, t, measured_hi](int i) {
        if (i < 0 || i > measured_hi)
            throw SequencingError("estimator: measured index " + std::to_string(i) +
                                  " outside 0.." + std::to_string(measured_hi));
        if (static_cast<std::size_t>(i) >= mem.x_hist.size())
            throw SequencingError("estimator: x_hist does not cover index " + std::to_string(i));
        return mem.x_hist[static_cast<std::size_t>(i)];
    };
    ch.input = [&mem, t](int tau) {
        if (tau < 0 || tau >= t)
            throw SequencingError("estimator: input index " + std::to_string(tau) +
                                  " outside 0.." + std::to_string(t - 1));
        if (static_cast<std::size_t>(tau) >= mem.u_hist.size())
            throw SequencingError("estimator: u_hist does not cover index " + std::to_string(tau));
        return mem.u_hist[static_cast<std::size_t>(tau)];
    };
    ch.model = [&mem](int tau, const Vector& x_own, const Vector&, double u) {
        if (static_cast<std::size_t>(tau) >= mem.theta_hist.size())
            throw SequencingError("estimator: theta_hist does not cover slot " +
                                  std::to_string(tau));
        double v = mem.theta_hist[static_cast<std::size_t>(tau)].dot(mem.regressor(x_own, u));
        if (mem.known_term) v += mem.known_term(x_own);
        return v;
    };

    return detail::estimate_chain(std::span<detail::ChainChannel>(&ch, 1), t)[0];
}

}  // namespace ailc
