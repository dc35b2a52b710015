#include "ailc/ddilc.hpp"

#include <cmath>

#include "ailc/errors.hpp"

namespace ailc {

DdilcResult ddilc_run_experiment(const PlantSpec& plant, const DdilcParams& p,
                                 const RefFn& reference, const DisturbanceSpec& disturbance,
                                 int iterations) {
    if (plant.rho != 1)
        throw ConfigError("ddilc: only relative degree 1 plants are supported");
    if (!(p.eta > 0.0 && p.eta <= 1.0)) throw ConfigError("ddilc: eta must be in (0, 1]");
    if (!(p.rho > 0.0 && p.rho <= 1.0)) throw ConfigError("ddilc: rho must be in (0, 1]");
    if (!(p.lambda > 0.0)) throw ConfigError("ddilc: lambda must be > 0");
    if (!(p.mu > 0.0)) throw ConfigError("ddilc: mu must be > 0");
    if (p.theta0 == 0.0) throw ConfigError("ddilc: theta0 must be nonzero");
    if (!reference) throw ConfigError("ddilc: reference is required");
    if (iterations < 0) throw ConfigError("ddilc: iterations must be >= 0");

    const int slots = plant.horizon; // control steps t = 0..horizon-1
    std::vector<double> theta_p(static_cast<std::size_t>(slots), p.theta0);
    std::vector<double> u_cur(static_cast<std::size_t>(slots), 0.0); // u_1 = 0
    std::vector<double> u_prev(static_cast<std::size_t>(slots), 0.0);
    std::vector<double> x_prev; // previous iteration's trajectory
    bool have_prev = false;

    DisturbanceStream dist(disturbance);
    DdilcResult result;
    result.traces.reserve(static_cast<std::size_t>(iterations));

    for (int k = 1; k <= iterations; ++k) {
        PlantState ps = reset(plant, k);
        IterationTrace trace;
        trace.k = k;
        trace.rows.reserve(static_cast<std::size_t>(slots));

        for (int t = 0; t < slots; ++t) {
            const double u = u_cur[static_cast<std::size_t>(t)];
            const double w = dist.sample(k, t, ps.x[static_cast<std::size_t>(t)]);
            const double x_next = step(plant, ps, t, u, w);
            TraceRow row;
            row.t = t;
            row.x_next = x_next;
            row.r = reference(k, t + 1);
            row.e = x_next - row.r;
            row.u = u;
            row.w_applied = w;
            row.solve.u = u;
            trace.rows.push_back(row);
        }
        trace.finalize(plant.rho);

        // PPD update along the iteration axis, then the next input profile
        // from this iteration's own reference error.
        for (int t = 0; t < slots; ++t) {
            const std::size_t st = static_cast<std::size_t>(t);
            const double du = have_prev ? u_cur[st] - u_prev[st] : 0.0;
            const double dx = have_prev
                                  ? ps.x[static_cast<std::size_t>(t + 1)] -
                                        x_prev[static_cast<std::size_t>(t + 1)]
                                  : 0.0;
            double cand = theta_p[st] +
                          p.eta * du * (dx - theta_p[st] * du) / (p.mu + du * du);
            const bool flipped = std::signbit(cand) != std::signbit(p.theta0);
            if (flipped || std::abs(cand) <= p.reset_eps || std::abs(du) <= p.reset_eps)
                cand = p.theta0;
            theta_p[st] = cand;

            const double err = trace.rows[st].r - trace.rows[st].x_next;
            const double gain = p.rho * theta_p[st] / (p.lambda + theta_p[st] * theta_p[st]);
            const double u_next = u_cur[st] + gain * err;
            if (!std::isfinite(u_next))
                throw NumericError("ddilc input update produced a non-finite value", k, t,
                                   u_cur[st]);
            u_prev[st] = u_cur[st];
            u_cur[st] = u_next;
        }
        x_prev = ps.x;
        have_prev = true;

        result.traces.push_back(std::move(trace));
    }

    result.theta_p_final = std::move(theta_p);
    result.disturbance_sup = dist.observed_sup();
    return result;
}

}  // namespace ailc
