#pragma once

#include <Eigen/Dense>
#include <functional>

namespace ailc {

using Vector = Eigen::VectorXd;

/// Regressor f(X, u) of the parameterized dynamics x(t+rho) = theta(t)^T f(X, u) + w.
/// X is the state window [x(t+rho-1), ..., x(t)] (newest first), length rho.
using Regressor = std::function<Vector(const Vector& X, double u)>;

/// Known parameter schedule theta(t) (simulation-side truth, hidden from the controller).
using ThetaSchedule = std::function<Vector(int t)>;

/// Initial state block x(0..rho-1) for iteration k (newest-first not applied here:
/// entry i is x(i)).
using InitialStates = std::function<Vector(int k)>;

/// Optional known additive dynamics term h(X); the plant evolves as
/// x(t+rho) = h(X) + theta(t)^T f(X, u) + w. Empty means h = 0.
using KnownTerm = std::function<double(const Vector& X)>;

/// Reference r_k(i) evaluated at absolute time index i (the tracking target
/// for control step t is r_k(t+rho)).
using RefFn = std::function<double(int k, int i)>;

}  // namespace ailc
