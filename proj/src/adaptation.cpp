#include "ailc/adaptation.hpp"

#include <cmath>
#include <string>

#include "ailc/errors.hpp"

namespace ailc {

const char* to_string(AdaptVariant v) {
    switch (v) {
        case AdaptVariant::robust: return "robust";
        case AdaptVariant::disturbance_free: return "disturbance_free";
        case AdaptVariant::known_bound: return "known_bound";
    }
    return "?";
}

AdaptState make_adapt_state(AdaptVariant variant, double eta, const ProjectionBall& ball,
                            const Vector& theta_init, int horizon_slots, double w_init,
                            double w_plus, bool m_unit) {
    if (!(eta > 0.0 && eta < 2.0))
        throw ConfigError("adaptation: eta must lie in (0, 2), got " + std::to_string(eta));
    if (!(ball.radius > 0.0)) throw ConfigError("adaptation: ball radius must be positive");
    if (ball.center.size() != theta_init.size())
        throw ConfigError("adaptation: theta_init / ball center dimension mismatch");
    if (horizon_slots < 1) throw ConfigError("adaptation: need at least one time slot");
    if (variant == AdaptVariant::known_bound && w_plus < 0.0)
        throw ConfigError("adaptation: known bound w_plus must be >= 0");
    if (w_init < 0.0) throw ConfigError("adaptation: w_init must be >= 0");

    AdaptState st;
    st.variant = variant;
    st.eta = eta;
    st.ball = ball;
    st.w_plus = w_plus;
    st.m_unit = m_unit;
    st.theta_hat.assign(static_cast<std::size_t>(horizon_slots), theta_init);
    st.w_hat.assign(static_cast<std::size_t>(horizon_slots), w_init);
    return st;
}

std::pair<double, double> normalized_error(double x_next, const Vector& theta_hat_t,
                                           const Vector& f_val) {
    const double m_sq = 1.0 + f_val.squaredNorm();
    return {(x_next - theta_hat_t.dot(f_val)) / m_sq, m_sq};
}

double dead_zone(double epsilon, double m_sq, double w_bound) {
    const double abs_eps = std::abs(epsilon);
    if (abs_eps <= w_bound / m_sq) return 0.0;
    return 1.0 - w_bound / (abs_eps * m_sq);
}

Vector project(const Vector& theta_bar, const ProjectionBall& ball) {
    const Vector d = theta_bar - ball.center;
    const double n = d.norm();
    if (n <= ball.radius) return theta_bar;
    return ball.center + d * (ball.radius / n);
}

namespace {

void check_slot(const AdaptState& state, int t) {
    if (t < 0 || static_cast<std::size_t>(t) >= state.theta_hat.size())
        throw SequencingError("gdpa update: slot t = " + std::to_string(t) + " out of range");
}

GdpaDiag update_common(AdaptState& state, int t, double x_next, const Vector& f_val,
                       double w_bound, bool update_w_hat) {
    Vector& th = state.theta_hat[static_cast<std::size_t>(t)];

    GdpaDiag diag;
    double m_sq;
    std::tie(diag.epsilon, m_sq) = normalized_error(x_next, th, f_val);
    if (state.m_unit) {
        m_sq = 1.0;
        diag.epsilon = x_next - th.dot(f_val);
    }
    diag.m_sq = m_sq;
    diag.a = dead_zone(diag.epsilon, m_sq, w_bound);

    const Vector theta_bar = th + state.eta * diag.a * diag.epsilon * f_val;
    const Vector projected = project(theta_bar, state.ball);
    diag.projected = (theta_bar - state.ball.center).norm() > state.ball.radius;
    th = projected;

    if (update_w_hat)
        state.w_hat[static_cast<std::size_t>(t)] += state.eta * diag.a * std::abs(diag.epsilon);
    return diag;
}

}  // namespace

GdpaDiag gdpa_update(AdaptState& state, int t, double x_next, const Vector& f_val) {
    check_slot(state, t);
    if (state.variant == AdaptVariant::disturbance_free)
        throw ConfigError("gdpa_update called on a disturbance_free state; use "
                          "gdpa_update_disturbance_free");
    if (state.variant == AdaptVariant::known_bound)
        return update_common(state, t, x_next, f_val, state.w_plus, /*update_w_hat=*/false);
    return update_common(state, t, x_next, f_val, state.w_hat[static_cast<std::size_t>(t)],
                         /*update_w_hat=*/true);
}

GdpaDiag gdpa_update_disturbance_free(AdaptState& state, int t, double x_next,
                                      const Vector& f_val) {
    check_slot(state, t);
    if (state.variant != AdaptVariant::disturbance_free)
        throw ConfigError("gdpa_update_disturbance_free called on a " +
                          std::string(to_string(state.variant)) + " state");
    // a = 1 unconditionally: a zero dead-zone bound never gates (and a*epsilon
    // is zero anyway in the only case where the gate would read 0).
    GdpaDiag diag = update_common(state, t, x_next, f_val, 0.0, /*update_w_hat=*/false);
    diag.a = 1.0;
    return diag;
}

GdpaDiag apply_update(AdaptState& state, int t, double x_next, const Vector& f_val) {
    if (state.variant == AdaptVariant::disturbance_free)
        return gdpa_update_disturbance_free(state, t, x_next, f_val);
    return gdpa_update(state, t, x_next, f_val);
}

double lyapunov(const Vector& theta_hat, double w_hat, const Vector& theta_true, double w_true) {
    if (theta_hat.size() != theta_true.size())
        throw ConfigError("lyapunov: dimension mismatch");
    return 0.5 * (theta_hat - theta_true).squaredNorm() + 0.5 * (w_hat - w_true) * (w_hat - w_true);
}

}  // namespace ailc
