#pragma once

#include <functional>
#include <span>

#include "ailc/types.hpp"

namespace ailc {

// State-vector estimation for relative degree rho >= 2: at control time t the
// plant window X(t) = [x(t+rho-1), ..., x(t)] contains rho-1 future values.
// They are reconstructed bottom-up, one level per step ahead:
//
//   x^(t+j|t) = h(Xa) + theta_hat(tau)^T f(Xa, u(tau)),   tau = t - rho + j,
//
// where Xa = [v(tau+rho-1), ..., v(tau)] resolves each index to the measured
// value when it is <= t and to the previously computed level estimate
// otherwise. Indices <= rho-1 are known initial states and are used directly
// (which also covers every case where tau would be negative).

/// Everything the chain may legally read at time t. x_hist covers indices
/// 0..max(t, rho-1) (measured states plus the known initial block), u_hist
/// covers 0..t-1, theta_hist covers the slots 0..T-rho.
struct EstimatorMemory {
    std::span<const double> x_hist;
    std::span<const double> u_hist;
    std::span<const Vector> theta_hist;
    int rho = 1;
    Regressor regressor;
    KnownTerm known_term; ///< optional
};

/// Returns X^(t) = [x^(t+rho-1|t), ..., x^(t+1|t), x(t)] (newest first,
/// length rho). For rho = 1 this is just [x(t)] with no model evaluation.
/// Out-of-range reads throw SequencingError.
Vector estimate_state_vector(const EstimatorMemory& mem, int t);

namespace detail {

/// One channel's view of the lockstep estimation chain (the MIMO runner feeds
/// several of these; estimate_state_vector wraps exactly one).
struct ChainChannel {
    int rho = 1;
    /// measured(i): x(i) for i <= t, plus known initial states i <= rho-1.
    std::function<double(int)> measured;
    /// u(tau) for tau = 0..t-1.
    std::function<double(int)> input;
    /// h(Xa) + theta_hat(tau)^T f(Xa, Xcross, u); Xcross is empty for SISO.
    std::function<double(int tau, const Vector& x_own, const Vector& x_cross, double u)> model;
};

/// Runs the bottom-up chain for all channels in lockstep (levels advance
/// together so cross-channel reads of higher levels are already available).
/// Returns one estimated window per channel.
std::vector<Vector> estimate_chain(std::span<ChainChannel> channels, int t);

}  // namespace detail

}  // namespace ailc
