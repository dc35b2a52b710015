#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ailc/types.hpp"

namespace ailc {

/// Description of one scalar plant x(t+rho) = h(X) + theta(t)^T f(X, u) + w,
/// with X = [x(t+rho-1), ..., x(t)] and t = 0..horizon-rho.
struct PlantSpec {
    std::string name;
    int rho = 1;      ///< relative degree (>= 1)
    int horizon = 50; ///< T: states run over 0..T, controls over 0..T-rho
    int p_dim = 1;    ///< parameter dimension

    Regressor regressor;
    Regressor regressor_du;       ///< optional analytic df/du; empty -> central difference
    KnownTerm known_term;         ///< optional h(X); empty -> 0
    ThetaSchedule theta_schedule; ///< truth, used only by the simulation side
    InitialStates initial_states; ///< x(0..rho-1) per iteration
};

/// One iteration's trajectory. Entries of x beyond `filled` are not yet
/// determined; reading them is a sequencing error.
struct PlantState {
    int k = 1;
    std::vector<double> x;         ///< size horizon+1, valid indices 0..filled
    int filled = 0;                ///< highest valid index in x
    std::vector<double> w_applied; ///< per control step t = 0..horizon-rho
};

/// Start iteration k: places the initial state block x(0..rho-1).
PlantState reset(const PlantSpec& spec, int k);

/// Apply input u and disturbance w at control step t; writes and returns
/// x(t+rho). Steps must be taken in order t = 0, 1, 2, ...
double step(const PlantSpec& spec, PlantState& state, int t, double u, double w);

/// Read the measured window X(t) = [x(t+rho-1), ..., x(t)] (newest first).
/// Requires t+rho-1 <= state.filled.
Vector state_window(const PlantSpec& spec, const PlantState& state, int t);

/// Monte-Carlo audit of the standing assumptions: samples (X, u, phi) with phi
/// in the given parameter ball and reports the observed control-gain floor
/// |phi^T df/du| plus empirical Lipschitz constants of f. Advisory only.
struct AssumptionReport {
    int samples = 0;
    double min_gain = 0.0;     ///< smallest |phi^T df/du| seen
    double max_gain = 0.0;     ///< largest |phi^T df/du| seen
    double min_gain_u = 0.0;   ///< u at which the minimum occurred
    double lipschitz_x = 0.0;  ///< max ||f(X1,u)-f(X2,u)|| / ||X1-X2||
    double lipschitz_u = 0.0;  ///< max ||f(X,u1)-f(X,u2)|| / |u1-u2|
    bool gain_floor_suspect = false; ///< min_gain is near zero (< 1e-3 absolute)
};

struct SampleBox {
    double x_lo = -2.0, x_hi = 2.0; ///< componentwise range for X samples
    double u_lo = -3.0, u_hi = 3.0;
};

AssumptionReport assumption_check(const PlantSpec& spec, const Vector& ball_center,
                                  double ball_radius, int samples, std::uint64_t seed,
                                  const SampleBox& box = {});

}  // namespace ailc
