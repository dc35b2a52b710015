#pragma once

#include <limits>
#include <string>
#include <vector>

#include "ailc/adaptation.hpp"
#include "ailc/disturbances.hpp"
#include "ailc/plant.hpp"
#include "ailc/solver.hpp"
#include "ailc/types.hpp"

namespace ailc {

enum class InputMode { fixed_point, direct_solve };
enum class MMode { normalized, unit };

struct ControllerConfig {
    InputMode input_mode = InputMode::fixed_point;
    MMode m_mode = MMode::normalized;
    SolverConfig solver{};
};

/// One control step of one iteration. x_next/r/e refer to index t+rho; the
/// adaptation fields (epsilon, a) are this iteration's post-rollout update
/// quantities and w_hat is the bound estimate the iteration ran with.
struct TraceRow {
    int t = 0;
    double x_next = 0.0;
    double r = 0.0;
    double e = 0.0;
    double u = 0.0;
    double epsilon = std::numeric_limits<double>::quiet_NaN();
    double a = std::numeric_limits<double>::quiet_NaN();
    double w_hat = std::numeric_limits<double>::quiet_NaN();
    /// ||theta_hat_k(t) - theta(t)||^2 (pre-update); NaN without a truth schedule.
    double theta_err_sq = std::numeric_limits<double>::quiet_NaN();
    double w_applied = 0.0;
    SolveResult solve{};
};

struct IterationTrace {
    int k = 1;
    std::vector<TraceRow> rows;
    /// max / mean of |e| over rows with t >= rho (the first rho errors of an
    /// iteration are excluded from metrics).
    double max_err = 0.0;
    double avg_err = 0.0;

    void finalize(int rho);
};

/// Generalization of PlantSpec used by the MIMO runner: the regressor may read
/// the other channel's state window (measured during plant evolution and
/// adaptation, estimated inside the controller). X_cross is empty for SISO.
struct ChannelSpec {
    std::string name;
    int rho = 1;
    int horizon = 50;
    int p_dim = 1;
    std::function<Vector(const Vector& x_own, const Vector& x_cross, double u)> regressor;
    std::function<Vector(const Vector& x_own, const Vector& x_cross, double u)> regressor_du;
    KnownTerm known_term;
    ThetaSchedule theta_schedule;
    InitialStates initial_states;
};

/// Wraps a SISO plant as a cross-free channel.
ChannelSpec make_channel(const PlantSpec& plant);

struct ChannelSetup {
    ChannelSpec plant;
    AdaptState adapt;
    ControllerConfig cfg;
    RefFn reference;
    DisturbanceSpec disturbance;
};

struct ExperimentSpec {
    std::vector<ChannelSetup> channels; ///< one (SISO) or two (lockstep MIMO)
    int iterations = 1;                 ///< K
};

struct ChannelResult {
    std::vector<IterationTrace> traces;
    AdaptState adapt_final; ///< estimates for iteration K+1
    /// max over all updates of (||theta_hat - center|| - R); <= 0 means the
    /// projection kept every estimate inside the ball.
    double containment_violation = -std::numeric_limits<double>::infinity();
    double disturbance_sup = 0.0; ///< largest |w| actually injected
};

struct ExperimentResult {
    std::vector<ChannelResult> channels;
};

/// Rolls a single fresh iteration k with the given (read-only) estimates; no
/// adaptation update happens here. Exposed for tests and one-shot use.
IterationTrace run_iteration(const PlantSpec& plant, const AdaptState& adapt,
                             const ControllerConfig& cfg, const RefFn& reference,
                             DisturbanceStream& disturbance, int k);

/// Full experiment: for k = 1..K roll an iteration, then apply the parameter
/// update at every t from measured data (updates are batched after the
/// rollout and take effect at k+1).
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Convenience wrapper for a single SISO channel.
ChannelResult run_experiment(const PlantSpec& plant, const AdaptState& adapt0,
                             const ControllerConfig& cfg, const RefFn& reference,
                             const DisturbanceSpec& disturbance, int iterations);

/// Two-channel lockstep run (per-channel adaptation, estimation and input
/// computation; cross-channel regressor terms read the other channel's
/// measured or estimated states).
ExperimentResult mimo_run_experiment(const ExperimentSpec& spec);

}  // namespace ailc
