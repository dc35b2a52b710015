#pragma once

#include <cstdint>
#include <vector>

#include "ailc/types.hpp"

namespace ailc {

// Input computation: solve Z(u) = theta_hat^T f(X^, u) - r = 0 by the
// contraction iteration
//
//   u^0 = 0,   u^p = T(u^{p-1}),   T(u) = u - Z(u)/l'     (positive gain)
//                                  T(u) = u + Z(u)/l'     (negative gain)
//
// with l' an upper bound on |theta_hat^T df/du| over the ball B(0, |c'|/d0),
// c' = Z(0). When 0 < d0 <= |gain| <= l' holds on that ball, T contracts with
// ratio 1 - d0/l' and the iterate after
//
//   p0 = floor( log_{1 - d0/l'}( eps*d0 / (l'*|u^1 - u^0|) ) ) + 1
//
// steps lies within eps of the exact root. d0 is supplied by the user; an
// overestimate voids the step-count guarantee (detected post hoc through the
// residual and the ball-confinement flag).

enum class GainSign { positive, negative, auto_detect };
enum class StopReason { criterion_met, fixed_point_exact, cap_hit };

const char* to_string(StopReason r);

struct LPrimeStrategy {
    enum class Kind { user_fixed, sampled };
    Kind kind = Kind::sampled;
    double value = 0.0;         ///< user_fixed: the bound itself (> d0_lower)
    double margin = 1.25;       ///< sampled: safety factor applied to the max sampled gain
    int samples = 256;          ///< sampled: grid size over the iteration ball
};

struct SolverConfig {
    double d0_lower = 0.1;      ///< user-supplied lower bound on |gain|, > 0
    LPrimeStrategy l_prime{};
    double epsilon_tol = 1e-6;  ///< target |u^p - u*|
    int max_iter_cap = 10000;
    GainSign gain_sign = GainSign::auto_detect;
    bool record_history = false; ///< keep all iterates in SolveResult::history
};

struct SolveResult {
    double u = 0.0;
    int iterations = 0;         ///< contraction steps actually taken
    std::int64_t p0 = 0;        ///< stop count from the displayed formula
    double residual = 0.0;      ///< |Z(u)| at the returned iterate
    StopReason stop_reason = StopReason::criterion_met;
    double l_prime = 0.0;
    double c_prime = 0.0;
    double sampled_min_gain = 0.0; ///< sampled strategy: min |gain| seen on the grid
    bool left_ball = false;        ///< an iterate escaped B(0, |c'|/d0)
    std::vector<double> history;   ///< iterates u^0..u^p when record_history
};

/// Stop count p0 per the displayed formula; returns 1 when u1 == u0 and never
/// less than 1. Requires 0 < d0 < l_prime and eps > 0.
std::int64_t stopping_p0(double u1, double u0, double d0, double l_prime, double eps);

/// Contraction solve of theta_hat^T f(X_hat, u) = r_target. regressor_du may
/// be empty (central finite difference with h = 1e-6 * max(1, |u|)).
SolveResult solve_fixed_point(const Vector& theta_hat, const Vector& X_hat, double r_target,
                              const SolverConfig& cfg, const Regressor& regressor,
                              const Regressor& regressor_du = {});

/// Bisection oracle for the same scalar equation. If [lo, hi] does not bracket
/// a sign change, the bracket is expanded by doubling from +-1 up to +-2^40;
/// failure to bracket throws BracketingError. Answers to |u - u*| <= tol.
double oracle_root(const Vector& theta_hat, const Vector& X_hat, double r_target,
                   const Regressor& regressor, double lo = -1.0, double hi = 1.0,
                   double tol = 1e-12);

}  // namespace ailc
