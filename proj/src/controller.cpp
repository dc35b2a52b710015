#include "ailc/controller.hpp"

#include <cmath>
#include <string>

#include "ailc/errors.hpp"
#include "ailc/estimator.hpp"

namespace ailc {

void IterationTrace::finalize(int rho) {
    max_err = 0.0;
    avg_err = 0.0;
    int counted = 0;
    for (const TraceRow& row : rows) {
        if (row.t < rho) continue; // first rho errors excluded from metrics
        max_err = std::max(max_err, std::abs(row.e));
        avg_err += std::abs(row.e);
        ++counted;
    }
    if (counted > 0) avg_err /= counted;
}

ChannelSpec make_channel(const PlantSpec& plant) {
    ChannelSpec ch;
    ch.name = plant.name;
    ch.rho = plant.rho;
    ch.horizon = plant.horizon;
    ch.p_dim = plant.p_dim;
    if (plant.regressor)
        ch.regressor = [f = plant.regressor](const Vector& x_own, const Vector&, double u) {
            return f(x_own, u);
        };
    if (plant.regressor_du)
        ch.regressor_du = [d = plant.regressor_du](const Vector& x_own, const Vector&, double u) {
            return d(x_own, u);
        };
    ch.known_term = plant.known_term;
    ch.theta_schedule = plant.theta_schedule;
    ch.initial_states = plant.initial_states;
    return ch;
}

namespace {

// Working state of one channel inside the experiment loop.
struct ChanRun {
    const ChannelSetup* setup = nullptr;
    AdaptState adapt;
    DisturbanceStream dist;
    PlantState ps;
    std::vector<double> u; // inputs of the current iteration
    IterationTrace trace;
    double containment_violation = -std::numeric_limits<double>::infinity();
};

void validate_channels(const std::vector<ChannelSetup>& channels) {
    if (channels.empty() || channels.size() > 2)
        throw ConfigError("run_experiment: expected 1 or 2 channels, got " +
                          std::to_string(channels.size()));
    for (const ChannelSetup& c : channels) {
        const ChannelSpec& p = c.plant;
        if (p.rho < 1) throw ConfigError("channel '" + p.name + "': rho must be >= 1");
        if (p.horizon < p.rho) throw ConfigError("channel '" + p.name + "': horizon < rho");
        if (!p.regressor) throw ConfigError("channel '" + p.name + "': regressor is required");
        if (!p.theta_schedule)
            throw ConfigError("channel '" + p.name + "': theta_schedule is required");
        if (!p.initial_states)
            throw ConfigError("channel '" + p.name + "': initial_states is required");
        const int slots = p.horizon - p.rho + 1;
        if (static_cast<int>(c.adapt.theta_hat.size()) != slots)
            throw ConfigError("channel '" + p.name + "': adapt state has " +
                              std::to_string(c.adapt.theta_hat.size()) + " slots, expected " +
                              std::to_string(slots));
    }
    if (channels.size() == 2 && (channels[0].plant.rho != channels[1].plant.rho ||
                                 channels[0].plant.horizon != channels[1].plant.horizon))
        throw ConfigError("run_experiment: lockstep channels must share rho and horizon");
}

void reset_channel(ChanRun& cr, int k) {
    const ChannelSpec& p = cr.setup->plant;
    Vector init = p.initial_states(k);
    if (init.size() != p.rho)
        throw ConfigError("reset: initial_states returned " + std::to_string(init.size()) +
                          " values, expected rho = " + std::to_string(p.rho));
    for (int i = 0; i < init.size(); ++i)
        if (!std::isfinite(init(i)))
            throw ConfigError("reset: non-finite initial state at index " + std::to_string(i));
    cr.ps.k = k;
    cr.ps.x.assign(static_cast<std::size_t>(p.horizon) + 1, 0.0);
    for (int i = 0; i < p.rho; ++i) cr.ps.x[static_cast<std::size_t>(i)] = init(i);
    cr.ps.filled = p.rho - 1;
    cr.ps.w_applied.assign(static_cast<std::size_t>(p.horizon - p.rho) + 1, 0.0);
    cr.u.assign(static_cast<std::size_t>(p.horizon - p.rho) + 1, 0.0);
    cr.trace = IterationTrace{};
    cr.trace.k = k;
    cr.trace.rows.reserve(cr.u.size());
}

Vector measured_window(const ChanRun& cr, int t) {
    const int rho = cr.setup->plant.rho;
    Vector X(rho);
    for (int i = 0; i < rho; ++i) X(i) = cr.ps.x[static_cast<std::size_t>(t + rho - 1 - i)];
    return X;
}

// Estimated windows X^_c(t) for every channel (lockstep levels so cross reads
// of already-computed levels are available).
std::vector<Vector> estimate_windows(std::vector<ChanRun>& runs, int t) {
    const int rho = runs[0].setup->plant.rho;
    if (rho == 1) {
        std::vector<Vector> out(runs.size());
        for (std::size_t c = 0; c < runs.size(); ++c) {
            out[c] = Vector(1);
            out[c](0) = runs[c].ps.x[static_cast<std::size_t>(t)];
        }
        return out;
    }

    std::vector<detail::ChainChannel> chain(runs.size());
    for (std::size_t c = 0; c < runs.size(); ++c) {
        ChanRun& cr = runs[c];
        const int measured_hi = std::max(t, rho - 1);
        chain[c].rho = rho;
        chain[c].measured = [&cr, t, measured_hi](int i) {
            if (i < 0 || i > measured_hi)
                throw SequencingError("controller: estimator asked for x(" + std::to_string(i) +
                                      ") at control time " + std::to_string(t));
            return cr.ps.x[static_cast<std::size_t>(i)];
        };
        chain[c].input = [&cr, t](int tau) {
            if (tau < 0 || tau >= t)
                throw SequencingError("controller: estimator asked for u(" + std::to_string(tau) +
                                      ") at control time " + std::to_string(t));
            return cr.u[static_cast<std::size_t>(tau)];
        };
        chain[c].model = [&cr](int tau, const Vector& x_own, const Vector& x_cross, double uu) {
            double v = cr.adapt.theta_hat[static_cast<std::size_t>(tau)].dot(
                cr.setup->plant.regressor(x_own, x_cross, uu));
            if (cr.setup->plant.known_term) v += cr.setup->plant.known_term(x_own);
            return v;
        };
    }
    return detail::estimate_chain(chain, t);
}

void rollout(std::vector<ChanRun>& runs, int k) {
    const std::size_t n = runs.size();
    const ChannelSpec& p0 = runs[0].setup->plant;
    const int rho = p0.rho;
    const int t_max = p0.horizon - rho;

    for (ChanRun& cr : runs) reset_channel(cr, k);

    for (int t = 0; t <= t_max; ++t) {
        const std::vector<Vector> xhat = estimate_windows(runs, t);

        // Inputs: each channel solves its own implicit equation on the
        // estimated windows (cross terms use the other channel's estimates).
        for (std::size_t c = 0; c < n; ++c) {
            ChanRun& cr = runs[c];
            const ChannelSpec& plant = cr.setup->plant;
            const Vector& x_own = xhat[c];
            const Vector x_cross = (n == 2) ? xhat[1 - c] : Vector(0);

            Regressor f_bound = [&plant, &x_cross](const Vector& X, double uu) {
                return plant.regressor(X, x_cross, uu);
            };
            Regressor df_bound;
            if (plant.regressor_du)
                df_bound = [&plant, &x_cross](const Vector& X, double uu) {
                    return plant.regressor_du(X, x_cross, uu);
                };

            double r_target = cr.setup->reference(k, t + rho);
            double r_eff = r_target;
            if (plant.known_term) r_eff -= plant.known_term(x_own);

            const Vector& th = cr.adapt.theta_hat[static_cast<std::size_t>(t)];
            TraceRow row;
            row.t = t;
            row.r = r_target;
            try {
                if (cr.setup->cfg.input_mode == InputMode::fixed_point) {
                    row.solve = solve_fixed_point(th, x_own, r_eff, cr.setup->cfg.solver, f_bound,
                                                  df_bound);
                } else {
                    row.solve.u = oracle_root(th, x_own, r_eff, f_bound, -1.0, 1.0,
                                              cr.setup->cfg.solver.epsilon_tol);
                    row.solve.residual = std::abs(th.dot(f_bound(x_own, row.solve.u)) - r_eff);
                    row.solve.c_prime = th.dot(f_bound(x_own, 0.0)) - r_eff;
                }
            } catch (const NumericError& e) {
                throw NumericError(std::string("input solver diverged: ") + e.what(), k, t, e.u);
            }
            row.u = row.solve.u;
            row.w_hat = cr.adapt.w_hat[static_cast<std::size_t>(t)];
            if (plant.theta_schedule)
                row.theta_err_sq = (th - plant.theta_schedule(t)).squaredNorm();
            cr.u[static_cast<std::size_t>(t)] = row.u;
            cr.trace.rows.push_back(std::move(row));
        }

        // Plant evolution on measured states. Writing x(t+rho) cannot affect
        // the other channel's read window (which tops out at t+rho-1), so the
        // channel order is immaterial.
        for (std::size_t c = 0; c < n; ++c) {
            ChanRun& cr = runs[c];
            const ChannelSpec& plant = cr.setup->plant;
            const Vector x_own = measured_window(cr, t);
            const Vector x_cross = (n == 2) ? measured_window(runs[1 - c], t) : Vector(0);
            const double u = cr.u[static_cast<std::size_t>(t)];
            const double w = cr.dist.sample(k, t, cr.ps.x[static_cast<std::size_t>(t)]);

            const Vector f = plant.regressor(x_own, x_cross, u);
            if (f.size() != plant.p_dim)
                throw ConfigError("channel '" + plant.name + "': regressor dimension " +
                                  std::to_string(f.size()) + " != p_dim");
            double next = plant.theta_schedule(t).dot(f) + w;
            if (plant.known_term) next += plant.known_term(x_own);
            if (!std::isfinite(next))
                throw NumericError("plant state became non-finite", k, t, u);

            cr.ps.x[static_cast<std::size_t>(t + rho)] = next;
            cr.ps.filled = t + rho;
            cr.ps.w_applied[static_cast<std::size_t>(t)] = w;

            TraceRow& row = cr.trace.rows.back();
            row.x_next = next;
            row.e = next - row.r;
            row.w_applied = w;
        }
    }

    for (ChanRun& cr : runs) cr.trace.finalize(rho);
}

}  // namespace

IterationTrace run_iteration(const PlantSpec& plant, const AdaptState& adapt,
                             const ControllerConfig& cfg, const RefFn& reference,
                             DisturbanceStream& disturbance, int k) {
    if (k < 1) throw ConfigError("run_iteration: k must be >= 1");
    ChannelSetup setup;
    setup.plant = make_channel(plant);
    setup.adapt = adapt;
    setup.cfg = cfg;
    setup.reference = reference;

    std::vector<ChanRun> runs(1);
    runs[0].setup = &setup;
    runs[0].adapt = adapt;
    runs[0].dist = disturbance;
    std::vector<ChannelSetup> check{setup};
    validate_channels(check);
    rollout(runs, k);
    disturbance = runs[0].dist; // carry memoryful streams forward
    return runs[0].trace;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    validate_channels(spec.channels);
    if (spec.iterations < 0) throw ConfigError("run_experiment: iterations must be >= 0");

    const std::size_t n = spec.channels.size();
    std::vector<ChanRun> runs(n);
    for (std::size_t c = 0; c < n; ++c) {
        runs[c].setup = &spec.channels[c];
        runs[c].adapt = spec.channels[c].adapt;
        runs[c].dist = DisturbanceStream(spec.channels[c].disturbance);
        if (!spec.channels[c].reference)
            throw ConfigError("run_experiment: channel reference is required");
    }

    ExperimentResult result;
    result.channels.resize(n);
    for (std::size_t c = 0; c < n; ++c) result.channels[c].traces.reserve(spec.iterations);

    const int rho = spec.channels[0].plant.rho;
    const int t_max = spec.channels[0].plant.horizon - rho;

    for (int k = 1; k <= spec.iterations; ++k) {
        rollout(runs, k);

        // Batched parameter update from measured data; takes effect at k+1.
        for (std::size_t c = 0; c < n; ++c) {
            ChanRun& cr = runs[c];
            const ChannelSpec& plant = cr.setup->plant;
            for (int t = 0; t <= t_max; ++t) {
                const Vector x_own = measured_window(cr, t);
                const Vector x_cross = (n == 2) ? measured_window(runs[1 - c], t) : Vector(0);
                const Vector f = plant.regressor(x_own, x_cross, cr.u[static_cast<std::size_t>(t)]);
                double x_model = cr.ps.x[static_cast<std::size_t>(t + rho)];
                if (plant.known_term) x_model -= plant.known_term(x_own);

                const GdpaDiag diag = apply_update(cr.adapt, t, x_model, f);
                TraceRow& row = cr.trace.rows[static_cast<std::size_t>(t)];
                row.epsilon = diag.epsilon;
                row.a = diag.a;

                const double excess =
                    (cr.adapt.theta_hat[static_cast<std::size_t>(t)] - cr.adapt.ball.center).norm() -
                    cr.adapt.ball.radius;
                cr.containment_violation = std::max(cr.containment_violation, excess);
            }
            result.channels[c].traces.push_back(std::move(cr.trace));
        }
    }

    for (std::size_t c = 0; c < n; ++c) {
        result.channels[c].adapt_final = std::move(runs[c].adapt);
        result.channels[c].containment_violation = runs[c].containment_violation;
        result.channels[c].disturbance_sup = runs[c].dist.observed_sup();
    }
    return result;
}

ChannelResult run_experiment(const PlantSpec& plant, const AdaptState& adapt0,
                             const ControllerConfig& cfg, const RefFn& reference,
                             const DisturbanceSpec& disturbance, int iterations) {
    ExperimentSpec spec;
    spec.iterations = iterations;
    spec.channels.push_back(
        ChannelSetup{make_channel(plant), adapt0, cfg, reference, disturbance});
    ExperimentResult res = run_experiment(spec);
    return std::move(res.channels[0]);
}

ExperimentResult mimo_run_experiment(const ExperimentSpec& spec) {
    if (spec.channels.size() != 2)
        throw ConfigError("mimo_run_experiment: exactly 2 channels required");
    return run_experiment(spec);
}

}  // namespace ailc
