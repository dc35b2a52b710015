#include "doctest.h"

#include <cmath>

#include "ailc/controller.hpp"
#include "ailc/errors.hpp"

using namespace ailc;

namespace {

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

// x(t+1) = 2u + 1: regressor [u, 1], truth theta = [2, 1]
PlantSpec affine_plant() {
    PlantSpec p;
    p.name = "affine";
    p.rho = 1;
    p.horizon = 3;
    p.p_dim = 2;
    p.regressor = [](const Vector&, double u) {
        Vector f(2);
        f << u, 1.0;
        return f;
    };
    p.regressor_du = [](const Vector&, double) {
        Vector f(2);
        f << 1.0, 0.0;
        return f;
    };
    p.theta_schedule = [](int) { return vec2(2.0, 1.0); };
    p.initial_states = [](int) {
        Vector x0(1);
        x0 << 0.0;
        return x0;
    };
    return p;
}

ControllerConfig tight_cfg() {
    ControllerConfig cfg;
    cfg.solver.d0_lower = 1.0;
    cfg.solver.epsilon_tol = 1e-10;
    cfg.solver.l_prime.samples = 16;
    return cfg;
}

AdaptState affine_adapt(const Vector& theta0, AdaptVariant variant = AdaptVariant::robust) {
    ProjectionBall ball;
    ball.center = vec2(2.0, 1.0);
    ball.radius = 1.0;
    return make_adapt_state(variant, 1.0, ball, theta0, 3);
}

const RefFn kRefFive = [](int, int) { return 5.0; };

// rho = 2 channel plants used by the lockstep comparison
PlantSpec rho2_plant(const char* name, double th0, double th1, double x0, double x1,
                     bool use_cos) {
    PlantSpec p;
    p.name = name;
    p.rho = 2;
    p.horizon = 8;
    p.p_dim = 2;
    if (use_cos)
        p.regressor = [](const Vector& X, double u) {
            Vector f(2);
            f << std::cos(X(0)), u;
            return f;
        };
    else
        p.regressor = [](const Vector& X, double u) {
            Vector f(2);
            f << std::sin(X(0)), u;
            return f;
        };
    p.regressor_du = [](const Vector&, double) {
        Vector f(2);
        f << 0.0, 1.0;
        return f;
    };
    p.theta_schedule = [th0, th1](int) { return vec2(th0, th1); };
    p.initial_states = [x0, x1](int) { return vec2(x0, x1); };
    return p;
}

}  // namespace

TEST_CASE("iteration metrics exclude the first rho steps") {
    IterationTrace tr;
    const double errs[] = {10.0, -4.0, 2.0, -1.0};
    for (int t = 0; t < 4; ++t) {
        TraceRow row;
        row.t = t;
        row.e = errs[t];
        tr.rows.push_back(row);
    }
    tr.finalize(2);
    CHECK(tr.max_err == 2.0);
    CHECK(tr.avg_err == 1.5);

    tr.finalize(1);
    CHECK(tr.max_err == 4.0);
    CHECK(tr.avg_err == 7.0 / 3.0);

    tr.finalize(10); // nothing qualifies
    CHECK(tr.max_err == 0.0);
    CHECK(tr.avg_err == 0.0);
}

TEST_CASE("a controller holding the true parameters tracks the reference") {
    const PlantSpec plant = affine_plant();
    const AdaptState adapt = affine_adapt(vec2(2.0, 1.0));
    DisturbanceStream dist{DisturbanceSpec{}};

    const IterationTrace tr = run_iteration(plant, adapt, tight_cfg(), kRefFive, dist, 1);
    REQUIRE(tr.rows.size() == 3);
    for (int t = 0; t < 3; ++t) {
        const TraceRow& row = tr.rows[static_cast<std::size_t>(t)];
        CHECK(row.t == t);
        CHECK(row.r == 5.0);
        CHECK(std::abs(row.e) < 1e-9);
        CHECK(std::abs(row.u - 2.0) < 1e-9);
        CHECK(row.w_applied == 0.0);
        CHECK(row.w_hat == 0.0);
        CHECK(row.theta_err_sq == 0.0);
        // the rollout itself never adapts
        CHECK(std::isnan(row.epsilon));
        CHECK(std::isnan(row.a));
    }
    CHECK(tr.max_err < 1e-9);

    CHECK_THROWS_AS(run_iteration(plant, adapt, tight_cfg(), kRefFive, dist, 0), ConfigError);
}

TEST_CASE("direct solve mode lands on the bisection root") {
    const PlantSpec plant = affine_plant();
    const AdaptState adapt = affine_adapt(vec2(2.0, 1.0));
    ControllerConfig cfg = tight_cfg();
    cfg.input_mode = InputMode::direct_solve;
    DisturbanceStream dist{DisturbanceSpec{}};

    const IterationTrace tr = run_iteration(plant, adapt, cfg, kRefFive, dist, 1);
    for (const TraceRow& row : tr.rows) {
        // the bracket expansion probes u = 2 where Z vanishes exactly
        CHECK(row.u == 2.0);
        CHECK(row.e == 0.0);
        CHECK(row.solve.residual == 0.0);
    }
}

TEST_CASE("experiment batches updates between iterations") {
    const PlantSpec plant = affine_plant();
    const Vector theta0 = vec2(1.5, 1.0);
    DisturbanceSpec none;

    const ChannelResult res =
        run_experiment(plant, affine_adapt(theta0), tight_cfg(), kRefFive, none, 2);
    REQUIRE(res.traces.size() == 2);

    for (const TraceRow& row : res.traces[0].rows) {
        CHECK(row.w_hat == 0.0);             // first iteration runs on the initial estimates
        CHECK(row.theta_err_sq == 0.25);     // ||[1.5,1]-[2,1]||^2, before any update
        CHECK_FALSE(std::isnan(row.epsilon)); // filled in by the post-rollout update
        CHECK_FALSE(std::isnan(row.a));
    }
    // the k = 1 updates are visible to k = 2
    CHECK(res.traces[1].rows[0].w_hat > 0.0);
    CHECK(res.traces[1].rows[0].theta_err_sq < 0.25);
    CHECK(res.traces[1].max_err < res.traces[0].max_err);

    CHECK(res.adapt_final.w_hat[0] > 0.0);
    CHECK((res.adapt_final.theta_hat[0] - theta0).norm() > 0.0);
    CHECK(res.containment_violation <= 1e-12);
    CHECK(res.disturbance_sup == 0.0);

    // zero iterations: a well-formed empty experiment
    const ChannelResult empty =
        run_experiment(plant, affine_adapt(theta0), tight_cfg(), kRefFive, none, 0);
    CHECK(empty.traces.empty());
    CHECK(empty.adapt_final.theta_hat[0] == theta0);
}

TEST_CASE("learning drives the tracking error down without disturbances") {
    const PlantSpec plant = affine_plant();
    DisturbanceSpec none;
    const ChannelResult res =
        run_experiment(plant, affine_adapt(vec2(1.5, 1.0), AdaptVariant::disturbance_free),
                       tight_cfg(), kRefFive, none, 40);
    CHECK(res.traces.back().max_err < res.traces.front().max_err);
    CHECK(res.traces.back().max_err < 0.05);
}

TEST_CASE("experiments are bitwise reproducible") {
    const PlantSpec plant = affine_plant();
    DisturbanceSpec dist;
    dist.kind = DisturbanceKind::uniform;
    dist.seed = 42;
    dist.channel = 1;

    const ChannelResult a =
        run_experiment(plant, affine_adapt(vec2(1.5, 1.0)), tight_cfg(), kRefFive, dist, 5);
    const ChannelResult b =
        run_experiment(plant, affine_adapt(vec2(1.5, 1.0)), tight_cfg(), kRefFive, dist, 5);
    REQUIRE(a.traces.size() == b.traces.size());
    for (std::size_t k = 0; k < a.traces.size(); ++k)
        for (std::size_t t = 0; t < a.traces[k].rows.size(); ++t) {
            CHECK(a.traces[k].rows[t].u == b.traces[k].rows[t].u);
            CHECK(a.traces[k].rows[t].x_next == b.traces[k].rows[t].x_next);
            CHECK(a.traces[k].rows[t].w_applied == b.traces[k].rows[t].w_applied);
        }
    CHECK(a.adapt_final.theta_hat[0] == b.adapt_final.theta_hat[0]);
    CHECK(a.disturbance_sup == b.disturbance_sup);
    CHECK(a.disturbance_sup > 0.0);
}

TEST_CASE("a tight ball keeps every update contained") {
    const PlantSpec plant = affine_plant();
    ProjectionBall ball;
    ball.center = vec2(1.0, 0.5); // off the truth on purpose
    ball.radius = 0.05;
    const AdaptState adapt = make_adapt_state(AdaptVariant::robust, 1.9, ball, vec2(1.0, 0.5), 3);
    DisturbanceSpec dist;
    dist.kind = DisturbanceKind::uniform;
    dist.seed = 5;
    dist.channel = 1;

    const ChannelResult res = run_experiment(plant, adapt, tight_cfg(), kRefFive, dist, 5);
    CHECK(res.containment_violation <= 1e-12);
    CHECK(res.containment_violation > -1.0); // projection was actually exercised
}

TEST_CASE("two decoupled channels reproduce their SISO runs exactly") {
    const PlantSpec pa = rho2_plant("a", 0.3, 2.0, 0.1, 0.2, false);
    const PlantSpec pb = rho2_plant("b", 0.2, 1.5, 0.0, 0.1, true);
    const int slots = 7; // horizon 8, rho 2

    auto adapt_for = [slots](double c0, double c1, double o0) {
        ProjectionBall ball;
        ball.center = vec2(c0, c1);
        ball.radius = 0.5;
        return make_adapt_state(AdaptVariant::robust, 0.5, ball, vec2(c0 + o0, c1), slots);
    };
    const RefFn ra = [](int, int i) { return 0.5 + 0.01 * i; };
    const RefFn rb = [](int, int i) { return 0.3 - 0.005 * i; };

    DisturbanceSpec da;
    da.kind = DisturbanceKind::uniform;
    da.seed = 77;
    da.channel = 1;
    DisturbanceSpec db = da;
    db.channel = 2;

    const ChannelResult sa =
        run_experiment(pa, adapt_for(0.3, 2.0, 0.1), tight_cfg(), ra, da, 3);
    const ChannelResult sb =
        run_experiment(pb, adapt_for(0.2, 1.5, 0.1), tight_cfg(), rb, db, 3);

    ExperimentSpec mimo;
    mimo.iterations = 3;
    mimo.channels.push_back(ChannelSetup{make_channel(pa), adapt_for(0.3, 2.0, 0.1),
                                         tight_cfg(), ra, da});
    mimo.channels.push_back(ChannelSetup{make_channel(pb), adapt_for(0.2, 1.5, 0.1),
                                         tight_cfg(), rb, db});
    const ExperimentResult both = mimo_run_experiment(mimo);

    auto same = [](const ChannelResult& siso, const ChannelResult& chan) {
        REQUIRE(siso.traces.size() == chan.traces.size());
        for (std::size_t k = 0; k < siso.traces.size(); ++k) {
            REQUIRE(siso.traces[k].rows.size() == chan.traces[k].rows.size());
            for (std::size_t t = 0; t < siso.traces[k].rows.size(); ++t) {
                CHECK(siso.traces[k].rows[t].u == chan.traces[k].rows[t].u);
                CHECK(siso.traces[k].rows[t].x_next == chan.traces[k].rows[t].x_next);
                CHECK(siso.traces[k].rows[t].epsilon == chan.traces[k].rows[t].epsilon);
            }
        }
        for (std::size_t t = 0; t < siso.adapt_final.theta_hat.size(); ++t)
            CHECK(siso.adapt_final.theta_hat[t] == chan.adapt_final.theta_hat[t]);
    };
    same(sa, both.channels[0]);
    same(sb, both.channels[1]);
}

TEST_CASE("experiment setup is validated") {
    const PlantSpec plant = affine_plant();
    const ControllerConfig cfg = tight_cfg();
    DisturbanceSpec none;

    ExperimentSpec spec;
    CHECK_THROWS_AS(run_experiment(spec), ConfigError); // no channels

    ChannelSetup one{make_channel(plant), affine_adapt(vec2(2.0, 1.0)), cfg, kRefFive, none};
    spec.channels = {one, one, one};
    CHECK_THROWS_AS(run_experiment(spec), ConfigError); // too many

    spec.channels = {one};
    spec.iterations = -1;
    CHECK_THROWS_AS(run_experiment(spec), ConfigError);

    spec.iterations = 1;
    CHECK_THROWS_AS(mimo_run_experiment(spec), ConfigError); // needs exactly 2

    // lockstep channels must agree on the grid
    PlantSpec longer = affine_plant();
    longer.horizon = 4;
    AdaptState la = affine_adapt(vec2(2.0, 1.0));
    la.theta_hat.resize(4, vec2(2.0, 1.0));
    la.w_hat.resize(4, 0.0);
    ChannelSetup two{make_channel(longer), la, cfg, kRefFive, none};
    spec.channels = {one, two};
    CHECK_THROWS_AS(run_experiment(spec), ConfigError);

    // adaptation slots must match the control grid
    ChannelSetup short_slots = one;
    short_slots.adapt.theta_hat.pop_back();
    short_slots.adapt.w_hat.pop_back();
    spec.channels = {short_slots};
    CHECK_THROWS_AS(run_experiment(spec), ConfigError);

    ChannelSetup no_ref = one;
    no_ref.reference = RefFn{};
    spec.channels = {no_ref};
    CHECK_THROWS_AS(run_experiment(spec), ConfigError);

    ChannelSetup no_f = one;
    no_f.plant.regressor = nullptr;
    spec.channels = {no_f};
    CHECK_THROWS_AS(run_experiment(spec), ConfigError);
}
