#include "doctest.h"

#include <cmath>

#include "ailc/errors.hpp"
#include "ailc/rng.hpp"
#include "ailc/solver.hpp"

using namespace ailc;

namespace {

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

// f(X, u) = [u, 1]: Z(u) is affine with slope theta(0) and offset theta(1)
Vector f_affine(const Vector&, double u) {
    Vector f(2);
    f << u, 1.0;
    return f;
}

Vector f_affine_du(const Vector&, double) {
    Vector f(2);
    f << 1.0, 0.0;
    return f;
}

// f(X, u) = [u^3, u]: Z(u) = theta(0) u^3 + theta(1) u - r
Vector f_cubic(const Vector&, double u) {
    Vector f(2);
    f << u * u * u, u;
    return f;
}

Vector f_cubic_du(const Vector&, double u) {
    Vector f(2);
    f << 3.0 * u * u, 1.0;
    return f;
}

const Vector kNoState = Vector::Zero(1);

SolverConfig fixed_cfg(double d0, double l_prime, double eps) {
    SolverConfig cfg;
    cfg.d0_lower = d0;
    cfg.l_prime.kind = LPrimeStrategy::Kind::user_fixed;
    cfg.l_prime.value = l_prime;
    cfg.epsilon_tol = eps;
    return cfg;
}

}  // namespace

TEST_CASE("stop count follows the displayed formula") {
    CHECK(stopping_p0(1.0, 0.0, 1.0, 2.0, 1e-6) == 21);
    CHECK(stopping_p0(0.5, 0.0, 1.0, 10.0, 0.1) == 38);
    CHECK(stopping_p0(0.7, 0.7, 0.5, 1.0, 1e-6) == 1); // no first step, nothing to bound
    CHECK(stopping_p0(1e-6, 0.0, 1.0, 2.0, 1.0) == 1); // formula would give 0, clamped
    // near-degenerate contraction ratio saturates instead of overflowing
    CHECK(stopping_p0(1.0, 0.0, 1e-14, 1.0, 1e-6) == 1000000000000000);

    CHECK_THROWS_AS(stopping_p0(1.0, 0.0, 0.0, 2.0, 1e-6), ConfigError);
    CHECK_THROWS_AS(stopping_p0(1.0, 0.0, 2.0, 2.0, 1e-6), ConfigError);
    CHECK_THROWS_AS(stopping_p0(1.0, 0.0, 1.0, 2.0, 0.0), ConfigError);
}

TEST_CASE("contraction with ratio one half is exact in binary floating point") {
    // Z(u) = u - 1, l' = 2, d0 = 1: u^p = 1 - 2^-p exactly
    SolverConfig cfg = fixed_cfg(1.0, 2.0, 1e-6);
    cfg.record_history = true;

    const SolveResult res = solve_fixed_point(vec2(1.0, -1.0), kNoState, 0.0, cfg, f_affine);
    CHECK(res.c_prime == -1.0);
    CHECK(res.l_prime == 2.0);
    CHECK(res.p0 == 20);
    CHECK(res.iterations == 20);
    CHECK(res.stop_reason == StopReason::criterion_met);
    CHECK(res.u == 1.0 - 0x1.0p-20);
    CHECK(res.residual == 0x1.0p-20);
    CHECK(std::abs(res.u - 1.0) < 1e-6); // the epsilon guarantee it was sized for
    CHECK_FALSE(res.left_ball);
    CHECK(res.sampled_min_gain == 0.0); // fixed strategy does not sample
    REQUIRE(res.history.size() == 21);
    CHECK(res.history[0] == 0.0);
    CHECK(res.history[1] == 0.5);
    CHECK(res.history[2] == 0.75);
    CHECK(res.history.back() == res.u);

    SolverConfig loose = fixed_cfg(1.0, 2.0, 1e-3);
    const SolveResult r2 = solve_fixed_point(vec2(1.0, -1.0), kNoState, 0.0, loose, f_affine);
    CHECK(r2.p0 == 10);
    CHECK(r2.u == 1.0 - 0x1.0p-10);
    CHECK(std::abs(r2.u - 1.0) < 1e-3);
}

TEST_CASE("affine solve converges within the step budget") {
    // Z(u) = 3u - 3, d0 = 1.5, l' = 4.5: ratio 2/3
    const SolverConfig cfg = fixed_cfg(1.5, 4.5, 1e-6);
    const SolveResult res =
        solve_fixed_point(vec2(3.0, 2.0), kNoState, 5.0, cfg, f_affine, f_affine_du);
    CHECK(res.c_prime == -3.0);
    CHECK(res.p0 == 36);
    CHECK(res.iterations <= 36);
    CHECK(std::abs(res.u - 1.0) <= 1e-6);
    CHECK(res.residual < 1e-5);
    CHECK_FALSE(res.left_ball);

    // same instance with the finite-difference gain probe
    const SolveResult fd = solve_fixed_point(vec2(3.0, 2.0), kNoState, 5.0, cfg, f_affine);
    CHECK(fd.p0 == 36);
    CHECK(std::abs(fd.u - 1.0) <= 1e-6);
}

TEST_CASE("negative gain flips the iteration map") {
    // Z(u) = -3u + 3: root 1, gain -3
    const SolverConfig cfg = fixed_cfg(1.5, 4.5, 1e-6);
    const SolveResult res =
        solve_fixed_point(vec2(-3.0, 2.0), kNoState, -1.0, cfg, f_affine, f_affine_du);
    CHECK(res.c_prime == 3.0);
    CHECK(res.p0 == 36);
    CHECK(std::abs(res.u - 1.0) <= 1e-6);
    CHECK_FALSE(res.left_ball);

    SolverConfig forced = cfg;
    forced.gain_sign = GainSign::negative;
    const SolveResult same =
        solve_fixed_point(vec2(-3.0, 2.0), kNoState, -1.0, forced, f_affine, f_affine_du);
    CHECK(same.u == res.u);

    // forcing the wrong orientation expands instead of contracting; the ball
    // monitor is what reports the misconfiguration
    SolverConfig wrong = cfg;
    wrong.gain_sign = GainSign::positive;
    const SolveResult bad =
        solve_fixed_point(vec2(-3.0, 2.0), kNoState, -1.0, wrong, f_affine, f_affine_du);
    CHECK(bad.left_ball);
    CHECK(bad.residual > 1.0);
}

TEST_CASE("sampled gain bound scans the iteration ball") {
    // Z(u) = u^3 + 2u - 3: gain 3u^2 + 2 on B(0, 1.5), max 8.75, min 2
    SolverConfig cfg;
    cfg.d0_lower = 2.0;
    cfg.l_prime.kind = LPrimeStrategy::Kind::sampled;
    cfg.l_prime.margin = 1.25;
    cfg.l_prime.samples = 256;
    cfg.epsilon_tol = 1e-6;

    const SolveResult res =
        solve_fixed_point(vec2(1.0, 2.0), kNoState, 3.0, cfg, f_cubic, f_cubic_du);
    CHECK(res.c_prime == -3.0);
    CHECK(res.l_prime == 10.9375); // 1.25 * 8.75, endpoints are on the grid
    CHECK(res.sampled_min_gain == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(res.p0 == 71);
    CHECK(std::abs(res.u - 1.0) <= 1e-6);
    CHECK(res.residual < 1e-4);
    CHECK_FALSE(res.left_ball);
}

TEST_CASE("a flat regressor falls back to the d0 floor in the sampled bound") {
    // Z(u) = 1 for all u: no root, zero gain everywhere
    SolverConfig cfg;
    cfg.d0_lower = 1.0;
    cfg.epsilon_tol = 1e-6;
    Vector th(1);
    th << 1.0;
    auto f_const = [](const Vector&, double) {
        Vector f(1);
        f << 1.0;
        return f;
    };
    const SolveResult res = solve_fixed_point(th, kNoState, 0.0, cfg, f_const);
    CHECK(res.l_prime == 1.25); // margin * max(0, d0)
    CHECK(res.sampled_min_gain == 0.0);
    CHECK(res.p0 == 9);
    CHECK(res.left_ball);       // iterates drift without a root to stop at
    CHECK(res.residual == 1.0);
}

TEST_CASE("an overestimated d0 is reported through ball exit and residual") {
    // true gain is 1 but d0 = 50 shrinks the ball to 0.02 and p0 to 15
    const SolverConfig cfg = fixed_cfg(50.0, 100.0, 1e-6);
    const SolveResult res = solve_fixed_point(vec2(1.0, -1.0), kNoState, 0.0, cfg, f_affine);
    CHECK(res.p0 == 15);
    CHECK(res.iterations == 15);
    CHECK(res.stop_reason == StopReason::criterion_met);
    CHECK(res.left_ball);
    CHECK(res.residual > 0.5); // nowhere near the root, and says so
}

TEST_CASE("the iteration cap truncates long stop counts") {
    SolverConfig cfg = fixed_cfg(1.0, 2.0, 1e-6);
    cfg.max_iter_cap = 5;
    cfg.record_history = true;
    const SolveResult res = solve_fixed_point(vec2(1.0, -1.0), kNoState, 0.0, cfg, f_affine);
    CHECK(res.p0 == 20);
    CHECK(res.iterations == 5);
    CHECK(res.stop_reason == StopReason::cap_hit);
    CHECK(res.u == 0.96875);      // 1 - 2^-5
    CHECK(res.residual == 0.03125);
    REQUIRE(res.history.size() == 6);
    CHECK(res.history[3] == 0.875);
}

TEST_CASE("a zero offset is an exact solution without iterating") {
    SolverConfig cfg = fixed_cfg(1.0, 2.0, 1e-6);
    cfg.record_history = true;
    const SolveResult res = solve_fixed_point(vec2(1.0, 1.0), kNoState, 1.0, cfg, f_affine);
    CHECK(res.u == 0.0);
    CHECK(res.iterations == 0);
    CHECK(res.p0 == 1);
    CHECK(res.residual == 0.0);
    CHECK(res.stop_reason == StopReason::fixed_point_exact);
    REQUIRE(res.history.size() == 1);
    CHECK(res.history[0] == 0.0);
}

TEST_CASE("solver configuration is validated") {
    const Vector th = vec2(1.0, -1.0);
    SolverConfig cfg = fixed_cfg(1.0, 2.0, 1e-6);

    SolverConfig bad = cfg;
    bad.d0_lower = 0.0;
    CHECK_THROWS_AS(solve_fixed_point(th, kNoState, 0.0, bad, f_affine), ConfigError);

    bad = cfg;
    bad.epsilon_tol = 0.0;
    CHECK_THROWS_AS(solve_fixed_point(th, kNoState, 0.0, bad, f_affine), ConfigError);

    bad = cfg;
    bad.max_iter_cap = 0;
    CHECK_THROWS_AS(solve_fixed_point(th, kNoState, 0.0, bad, f_affine), ConfigError);

    bad = cfg;
    bad.l_prime.value = 1.0; // not above d0_lower
    CHECK_THROWS_AS(solve_fixed_point(th, kNoState, 0.0, bad, f_affine), ConfigError);

    bad = cfg;
    bad.l_prime.kind = LPrimeStrategy::Kind::sampled;
    bad.l_prime.samples = 1;
    CHECK_THROWS_AS(solve_fixed_point(th, kNoState, 0.0, bad, f_affine), ConfigError);

    bad = cfg;
    bad.l_prime.kind = LPrimeStrategy::Kind::sampled;
    bad.l_prime.margin = 1.0;
    CHECK_THROWS_AS(solve_fixed_point(th, kNoState, 0.0, bad, f_affine), ConfigError);

    CHECK_THROWS_AS(solve_fixed_point(th, kNoState, 0.0, cfg, Regressor{}), ConfigError);
}

TEST_CASE("a nonfinite offset raises a numeric error") {
    auto f_sing = [](const Vector&, double u) {
        Vector f(1);
        f << 1.0 / u;
        return f;
    };
    Vector th(1);
    th << 1.0;
    const SolverConfig cfg = fixed_cfg(1.0, 2.0, 1e-6);
    CHECK_THROWS_AS(solve_fixed_point(th, kNoState, 0.0, cfg, f_sing), NumericError);
}

TEST_CASE("bisection oracle finds roots and reports bracketing failures") {
    // endpoint hit: Z(1) = 0 exactly
    CHECK(oracle_root(vec2(1.0, 2.0), kNoState, 3.0, f_cubic) == 1.0);

    // midpoint hit: Z(u) = u on [-1, 1]
    Vector th1(1);
    th1 << 1.0;
    auto f_id = [](const Vector&, double u) {
        Vector f(1);
        f << u;
        return f;
    };
    CHECK(oracle_root(th1, kNoState, 0.0, f_id) == 0.0);

    // interior root beyond the initial bracket: expansion must find it
    const double root = oracle_root(vec2(1.0, 2.0), kNoState, 3.5, f_cubic);
    const double z = root * root * root + 2.0 * root - 3.5;
    CHECK(std::abs(z) < 1e-9);
    const double same = oracle_root(vec2(1.0, 2.0), kNoState, 3.5, f_cubic, 0.0, 0.5);
    CHECK(std::abs(same - root) < 1e-10);

    // Z(u) = u^2 + 1 has no real root anywhere
    auto f_sq = [](const Vector&, double u) {
        Vector f(2);
        f << u * u, 1.0;
        return f;
    };
    CHECK_THROWS_AS(oracle_root(vec2(1.0, 1.0), kNoState, 0.0, f_sq), BracketingError);

    CHECK_THROWS_AS(oracle_root(th1, kNoState, 0.0, f_id, -1.0, 1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(oracle_root(th1, kNoState, 0.0, Regressor{}), ConfigError);
}

TEST_CASE("randomized affine instances stay within the advertised tolerance") {
    for (int i = 0; i < 50; ++i) {
        const double g = rng::uniform(7, 1, i, 0, 0.5, 5.0) *
                         (rng::unit(7, 2, i, 0) < 0.5 ? -1.0 : 1.0);
        const double c = rng::uniform(7, 3, i, 0, -10.0, 10.0);
        const double r = rng::uniform(7, 4, i, 0, -10.0, 10.0);
        const double u_star = (r - c) / g;

        const SolverConfig cfg = fixed_cfg(0.9 * std::abs(g), 1.5 * std::abs(g), 1e-8);
        const SolveResult res =
            solve_fixed_point(vec2(g, c), kNoState, r, cfg, f_affine, f_affine_du);
        CHECK(std::abs(res.u - u_star) <= 1.1e-8);
        CHECK(res.stop_reason != StopReason::cap_hit);
    }
}
