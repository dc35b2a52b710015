#pragma once

#include <utility>
#include <vector>

#include "ailc/types.hpp"

namespace ailc {

struct ProjectionBall {
    Vector center;
    double radius = 1.0;
};

enum class AdaptVariant {
    robust,           ///< dead zone + disturbance-bound estimate w_hat
    disturbance_free, ///< a = 1, no w_hat update
    known_bound,      ///< dead zone uses a fixed known bound w_plus, w_hat frozen
};

const char* to_string(AdaptVariant v);

/// Per-time-instant parameter and disturbance-bound estimates for one
/// iteration. theta_hat(t) may start outside the ball (it is projected on the
/// first update); after any update it satisfies ||theta_hat(t)-center|| <= R.
struct AdaptState {
    AdaptVariant variant = AdaptVariant::robust;
    double eta = 1.9; ///< learning gain, must lie in (0, 2)
    ProjectionBall ball;
    double w_plus = 0.0;  ///< known disturbance bound (known_bound variant)
    bool m_unit = false;  ///< use m^2 = 1 instead of 1 + ||f||^2

    std::vector<Vector> theta_hat; ///< indexed by t = 0..T-rho
    std::vector<double> w_hat;     ///< same indexing, robust variant only
};

/// Builds a state with theta_hat(t) = theta_init and w_hat(t) = w_init for all
/// t. Validates eta in (0, 2), radius > 0, dimension agreement.
AdaptState make_adapt_state(AdaptVariant variant, double eta, const ProjectionBall& ball,
                            const Vector& theta_init, int horizon_slots, double w_init = 0.0,
                            double w_plus = 0.0, bool m_unit = false);

/// Prediction-error normalization: returns (epsilon, m_sq) with
/// m_sq = 1 + ||f||^2 and epsilon = (x_next - theta_hat^T f) / m_sq.
std::pair<double, double> normalized_error(double x_next, const Vector& theta_hat_t,
                                           const Vector& f_val);

/// Dead-zone gate: 0 when |epsilon| <= w_bound/m_sq, else 1 - w_bound/(|epsilon| m_sq).
/// Always lies in [0, 1].
double dead_zone(double epsilon, double m_sq, double w_bound);

/// Radial projection onto the closed ball (identity inside).
Vector project(const Vector& theta_bar, const ProjectionBall& ball);

/// Diagnostics of one parameter update.
struct GdpaDiag {
    double epsilon = 0.0;
    double m_sq = 1.0;
    double a = 0.0;
    bool projected = false; ///< the candidate left the ball and was pulled back
};

/// Robust / known-bound update at time slot t from measured x(t+rho) (with any
/// known term already subtracted) and the measured-regressor value f(X_k(t), u_k(t)).
/// Calling this on a disturbance_free state is a usage error.
GdpaDiag gdpa_update(AdaptState& state, int t, double x_next, const Vector& f_val);

/// Disturbance-free update (a = 1, no dead zone, w_hat untouched).
GdpaDiag gdpa_update_disturbance_free(AdaptState& state, int t, double x_next,
                                      const Vector& f_val);

/// Dispatch on state.variant.
GdpaDiag apply_update(AdaptState& state, int t, double x_next, const Vector& f_val);

/// Composite function V = 0.5 ||theta_hat - theta||^2 + 0.5 (w_hat - w)^2 used
/// by the convergence analysis; simulation-side diagnostic.
double lyapunov(const Vector& theta_hat, double w_hat, const Vector& theta_true, double w_true);

}  // namespace ailc
