#pragma once

#include <vector>

#include "ailc/controller.hpp"
#include "ailc/plant.hpp"
#include "ailc/types.hpp"

namespace ailc {

/// Data-driven ILC baseline (relative degree 1 only): a pseudo-partial-
/// derivative estimate theta'(t) is updated along the iteration axis and the
/// input profile is corrected with the previous iteration's tracking error.
struct DdilcParams {
    double eta = 0.5;    ///< PPD estimator gain, in (0, 1]
    double rho = 0.4;    ///< input update gain, in (0, 1]
    double lambda = 1.0; ///< input update regularizer, > 0
    double mu = 0.5;     ///< PPD update regularizer, > 0
    double theta0 = 1.0; ///< initial / reset PPD value, nonzero
    double reset_eps = 1e-4;
};

struct DdilcResult {
    std::vector<IterationTrace> traces;
    std::vector<double> theta_p_final; ///< PPD estimates after iteration K
    double disturbance_sup = 0.0;
};

/// Runs K iterations on the plant: u_1 = 0; after each rollout the PPD
/// estimate is updated (with candidate-then-reset semantics) and the next
/// input profile is formed from this iteration's reference error.
DdilcResult ddilc_run_experiment(const PlantSpec& plant, const DdilcParams& params,
                                 const RefFn& reference, const DisturbanceSpec& disturbance,
                                 int iterations);

}  // namespace ailc
