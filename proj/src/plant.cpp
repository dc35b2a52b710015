#include "ailc/plant.hpp"

#include <cmath>
#include <string>

#include "ailc/errors.hpp"
#include "ailc/rng.hpp"

namespace ailc {

namespace {

void validate_spec(const PlantSpec& spec) {
    if (spec.rho < 1) throw ConfigError("plant '" + spec.name + "': rho must be >= 1");
    if (spec.horizon < spec.rho)
        throw ConfigError("plant '" + spec.name + "': horizon must be >= rho");
    if (spec.p_dim < 1) throw ConfigError("plant '" + spec.name + "': p_dim must be >= 1");
    if (!spec.regressor) throw ConfigError("plant '" + spec.name + "': regressor is required");
    if (!spec.theta_schedule)
        throw ConfigError("plant '" + spec.name + "': theta_schedule is required");
    if (!spec.initial_states)
        throw ConfigError("plant '" + spec.name + "': initial_states is required");
}

}  // namespace

PlantState reset(const PlantSpec& spec, int k) {
    validate_spec(spec);
    if (k < 1) throw ConfigError("reset: iteration index k must be >= 1");

    Vector init = spec.initial_states(k);
    if (init.size() != spec.rho)
        throw ConfigError("reset: initial_states returned " + std::to_string(init.size()) +
                          " values, expected rho = " + std::to_string(spec.rho));
    for (int i = 0; i < init.size(); ++i)
        if (!std::isfinite(init(i)))
            throw ConfigError("reset: non-finite initial state at index " + std::to_string(i));

    PlantState state;
    state.k = k;
    state.x.assign(static_cast<std::size_t>(spec.horizon) + 1, 0.0);
    for (int i = 0; i < spec.rho; ++i) state.x[static_cast<std::size_t>(i)] = init(i);
    state.filled = spec.rho - 1;
    state.w_applied.assign(static_cast<std::size_t>(spec.horizon - spec.rho) + 1, 0.0);
    return state;
}

Vector state_window(const PlantSpec& spec, const PlantState& state, int t) {
    if (t < 0 || t + spec.rho - 1 > state.filled)
        throw SequencingError("state_window: x(" + std::to_string(t + spec.rho - 1) +
                              ") is not set yet (filled up to " + std::to_string(state.filled) +
                              ")");
    Vector X(spec.rho);
    for (int i = 0; i < spec.rho; ++i) X(i) = state.x[static_cast<std::size_t>(t + spec.rho - 1 - i)];
    return X;
}

double step(const PlantSpec& spec, PlantState& state, int t, double u, double w) {
    if (t < 0 || t > spec.horizon - spec.rho)
        throw SequencingError("step: control index t = " + std::to_string(t) +
                              " outside 0.." + std::to_string(spec.horizon - spec.rho));
    if (t + spec.rho != state.filled + 1)
        throw SequencingError("step: expected next write at x(" + std::to_string(state.filled + 1) +
                              "), got t + rho = " + std::to_string(t + spec.rho));

    const Vector X = state_window(spec, state, t);
    const Vector f = spec.regressor(X, u);
    if (f.size() != spec.p_dim)
        throw ConfigError("step: regressor returned dimension " + std::to_string(f.size()) +
                          ", expected " + std::to_string(spec.p_dim));
    const Vector theta = spec.theta_schedule(t);
    if (theta.size() != spec.p_dim)
        throw ConfigError("step: theta_schedule returned dimension " + std::to_string(theta.size()) +
                          ", expected " + std::to_string(spec.p_dim));

    double next = theta.dot(f) + w;
    if (spec.known_term) next += spec.known_term(X);
    if (!std::isfinite(next))
        throw NumericError("step: non-finite state x(" + std::to_string(t + spec.rho) + ")",
                           state.k, t, u);

    state.x[static_cast<std::size_t>(t + spec.rho)] = next;
    state.filled = t + spec.rho;
    state.w_applied[static_cast<std::size_t>(t)] = w;
    return next;
}

AssumptionReport assumption_check(const PlantSpec& spec, const Vector& ball_center,
                                  double ball_radius, int samples, std::uint64_t seed,
                                  const SampleBox& box) {
    validate_spec(spec);
    if (ball_center.size() != spec.p_dim)
        throw ConfigError("assumption_check: ball center dimension mismatch");
    if (samples < 2) throw ConfigError("assumption_check: need at least 2 samples");

    const double fd_h = 1e-6;
    auto df_du = [&](const Vector& X, double u) {
        if (spec.regressor_du) return spec.regressor_du(X, u);
        const double h = fd_h * std::max(1.0, std::abs(u));
        return Vector(((spec.regressor(X, u + h) - spec.regressor(X, u - h)) / (2.0 * h)).eval());
    };

    AssumptionReport rep;
    rep.samples = samples;
    rep.min_gain = std::numeric_limits<double>::infinity();

    Vector X_prev(spec.rho), X_cur(spec.rho);
    double u_prev = 0.0;
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < spec.rho; ++i)
            X_cur(i) = rng::uniform(seed, rng::kStreamAssumption, s, i, box.x_lo, box.x_hi);
        const double u = rng::uniform(seed, rng::kStreamAssumption, s, 100, box.u_lo, box.u_hi);

        // phi uniform in the ball: gaussian direction, radius via r = R * v^(1/p)
        Vector dir(spec.p_dim);
        for (int i = 0; i < spec.p_dim; ++i)
            dir(i) = rng::gaussian(seed, rng::kStreamAssumption, s, 200 + i);
        double norm = dir.norm();
        if (norm == 0.0) norm = 1.0;
        const double rad = ball_radius * std::pow(rng::unit(seed, rng::kStreamAssumption, s, 300),
                                                  1.0 / spec.p_dim);
        const Vector phi = ball_center + dir * (rad / norm);

        const double gain = std::abs(phi.dot(df_du(X_cur, u)));
        if (gain < rep.min_gain) {
            rep.min_gain = gain;
            rep.min_gain_u = u;
        }
        rep.max_gain = std::max(rep.max_gain, gain);

        const Vector f_cur = spec.regressor(X_cur, u);
        if (s > 0) {
            const double dx = (X_cur - X_prev).norm();
            if (dx > 1e-12)
                rep.lipschitz_x =
                    std::max(rep.lipschitz_x, (spec.regressor(X_cur, u_prev) -
                                               spec.regressor(X_prev, u_prev)).norm() / dx);
            const double du = std::abs(u - u_prev);
            if (du > 1e-12)
                rep.lipschitz_u =
                    std::max(rep.lipschitz_u, (f_cur - spec.regressor(X_cur, u_prev)).norm() / du);
        }
        X_prev = X_cur;
        u_prev = u;
    }

    rep.gain_floor_suspect = rep.min_gain < 1e-3;
    return rep;
}

}  // namespace ailc
