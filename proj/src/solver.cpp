#include "ailc/solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ailc/errors.hpp"

namespace ailc {

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::criterion_met: return "criterion_met";
        case StopReason::fixed_point_exact: return "fixed_point_exact";
        case StopReason::cap_hit: return "cap_hit";
    }
    return "?";
}

std::int64_t stopping_p0(double u1, double u0, double d0, double l_prime, double eps) {
    if (!(d0 > 0.0)) throw ConfigError("stopping_p0: d0 must be positive");
    if (!(l_prime > d0)) throw ConfigError("stopping_p0: l' must exceed d0");
    if (!(eps > 0.0)) throw ConfigError("stopping_p0: eps must be positive");
    if (u1 == u0) return 1;

    const double base = 1.0 - d0 / l_prime;            // contraction ratio, in (0, 1)
    const double q = eps * d0 / (l_prime * std::abs(u1 - u0));
    const double value = std::floor(std::log(q) / std::log(base)) + 1.0;
    if (value < 1.0) return 1;
    if (value > 1e15) return static_cast<std::int64_t>(1e15); // saturate pathological ratios
    return static_cast<std::int64_t>(value);
}

namespace {

double eval_gain(const Vector& theta_hat, const Vector& X_hat, double u,
                 const Regressor& regressor, const Regressor& regressor_du) {
    if (regressor_du) return theta_hat.dot(regressor_du(X_hat, u));
    const double h = 1e-6 * std::max(1.0, std::abs(u));
    return theta_hat.dot(regressor(X_hat, u + h) - regressor(X_hat, u - h)) / (2.0 * h);
}

}  // namespace

SolveResult solve_fixed_point(const Vector& theta_hat, const Vector& X_hat, double r_target,
                              const SolverConfig& cfg, const Regressor& regressor,
                              const Regressor& regressor_du) {
    if (!regressor) throw ConfigError("solve_fixed_point: regressor is required");
    if (!(cfg.d0_lower > 0.0)) throw ConfigError("solve_fixed_point: d0_lower must be positive");
    if (!(cfg.epsilon_tol > 0.0)) throw ConfigError("solve_fixed_point: epsilon_tol must be positive");
    if (cfg.max_iter_cap < 1) throw ConfigError("solve_fixed_point: max_iter_cap must be >= 1");
    if (cfg.l_prime.kind == LPrimeStrategy::Kind::sampled && cfg.l_prime.samples < 2)
        throw ConfigError("solve_fixed_point: sampled l' needs at least 2 samples");
    if (cfg.l_prime.kind == LPrimeStrategy::Kind::sampled && !(cfg.l_prime.margin > 1.0))
        throw ConfigError("solve_fixed_point: sampled l' margin must exceed 1");

    auto Z = [&](double u) { return theta_hat.dot(regressor(X_hat, u)) - r_target; };

    SolveResult res;
    res.c_prime = Z(0.0);
    if (!std::isfinite(res.c_prime))
        throw NumericError("solve_fixed_point: Z(0) is not finite", 0, 0, 0.0);

    if (res.c_prime == 0.0) {
        // u = 0 already satisfies the equation exactly.
        res.u = 0.0;
        res.iterations = 0;
        res.p0 = 1;
        res.residual = 0.0;
        res.stop_reason = StopReason::fixed_point_exact;
        if (cfg.record_history) res.history = {0.0};
        return res;
    }

    // Orientation of the iteration map. With a negative control gain the
    // mirrored map u + Z(u)/l' contracts instead.
    double sign = 1.0;
    switch (cfg.gain_sign) {
        case GainSign::positive: sign = 1.0; break;
        case GainSign::negative: sign = -1.0; break;
        case GainSign::auto_detect: {
            const double g0 = eval_gain(theta_hat, X_hat, 0.0, regressor, regressor_du);
            sign = (g0 < 0.0) ? -1.0 : 1.0;
            break;
        }
    }

    const double ball_radius = std::abs(res.c_prime) / cfg.d0_lower;

    double l_prime = 0.0;
    res.sampled_min_gain = std::numeric_limits<double>::infinity();
    if (cfg.l_prime.kind == LPrimeStrategy::Kind::user_fixed) {
        l_prime = cfg.l_prime.value;
        if (!(l_prime > cfg.d0_lower))
            throw ConfigError("solve_fixed_point: fixed l' must exceed d0_lower");
        res.sampled_min_gain = 0.0;
    } else {
        // Evenly spaced |gain| samples over the iteration ball B(0, |c'|/d0).
        double max_gain = 0.0;
        const int n = cfg.l_prime.samples;
        for (int i = 0; i < n; ++i) {
            const double u = -ball_radius + 2.0 * ball_radius * i / (n - 1);
            const double g = std::abs(eval_gain(theta_hat, X_hat, u, regressor, regressor_du));
            max_gain = std::max(max_gain, g);
            res.sampled_min_gain = std::min(res.sampled_min_gain, g);
        }
        // The margin keeps l' above the true supremum when the grid undershoots;
        // the d0 floor keeps the ratio well-defined even for a flat gain.
        l_prime = cfg.l_prime.margin * std::max(max_gain, cfg.d0_lower);
    }
    res.l_prime = l_prime;

    const double u0 = 0.0;
    const double u1 = u0 - sign * res.c_prime / l_prime; // Z(u0) = c'
    res.p0 = stopping_p0(u1, u0, cfg.d0_lower, l_prime, cfg.epsilon_tol);

    const std::int64_t steps = std::min<std::int64_t>(res.p0, cfg.max_iter_cap);
    res.stop_reason = (res.p0 > cfg.max_iter_cap) ? StopReason::cap_hit : StopReason::criterion_met;

    double u = u1;
    std::int64_t p = 1;
    if (cfg.record_history) {
        res.history.push_back(u0);
        res.history.push_back(u1);
    }
    if (std::abs(u1) > ball_radius * (1.0 + 1e-12)) res.left_ball = true;

    while (p < steps) {
        const double u_next = u - sign * Z(u) / l_prime;
        if (!std::isfinite(u_next))
            throw NumericError("solve_fixed_point: iterate diverged", 0, 0, u);
        ++p;
        if (cfg.record_history) res.history.push_back(u_next);
        if (std::abs(u_next) > ball_radius * (1.0 + 1e-12)) res.left_ball = true;
        if (u_next == u) {
            // Exact fixed point in floating point; further steps are no-ops.
            res.stop_reason = StopReason::fixed_point_exact;
            break;
        }
        u = u_next;
    }

    res.u = u;
    res.iterations = static_cast<int>(p);
    res.residual = std::abs(Z(u));
    return res;
}

double oracle_root(const Vector& theta_hat, const Vector& X_hat, double r_target,
                   const Regressor& regressor, double lo, double hi, double tol) {
    if (!regressor) throw ConfigError("oracle_root: regressor is required");
    if (!(tol > 0.0)) throw ConfigError("oracle_root: tol must be positive");
    if (lo > hi) std::swap(lo, hi);

    auto Z = [&](double u) { return theta_hat.dot(regressor(X_hat, u)) - r_target; };

    double f_lo = Z(lo), f_hi = Z(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;

    if (f_lo * f_hi > 0.0) {
        // Expand symmetrically by doubling until the bracket straddles a root.
        double bound = 1.0;
        const double limit = std::ldexp(1.0, 40);
        bool found = false;
        while (bound <= limit) {
            lo = -bound;
            hi = bound;
            f_lo = Z(lo);
            f_hi = Z(hi);
            if (f_lo == 0.0) return lo;
            if (f_hi == 0.0) return hi;
            if (f_lo * f_hi < 0.0) {
                found = true;
                break;
            }
            bound *= 2.0;
        }
        if (!found)
            throw BracketingError("oracle_root: no sign change in [-2^40, 2^40]; Z(-2^40)=" +
                                  std::to_string(f_lo) + ", Z(2^40)=" + std::to_string(f_hi));
    }

    for (int it = 0; it < 256 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = Z(mid);
        if (f_mid == 0.0) return mid;
        if (f_lo * f_mid < 0.0) {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace ailc
