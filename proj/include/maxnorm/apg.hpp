#ifndef MAXNORM_APG_HPP_
#define MAXNORM_APG_HPP_

#include <optional>

#include "maxnorm/types.hpp"

namespace maxnorm {

/// Accelerated proximal gradient settings for the nuclear-norm baseline.
/// The threshold follows a geometric continuation path from a large start
/// value down to mu, the standard warm-up of this solver family; stopping is
/// evaluated once the path reaches the target.
struct ApgConfig {
  double mu = 0.0;
  long max_iters = 500;
  double rel_change_tol = 1e-5;
  bool continuation = true;
  double continuation_factor = 0.7;  // mu_k = max(factor * mu_{k-1}, mu)
  double mu0_fraction = 0.99;        // mu_0 = fraction * sigma_max(Y zero-filled)
  // Working-rank tracking: each prox keeps at most sv leading components;
  // sv grows by one while the thresholded rank stays below it and by sv_step
  // when it hits the cap.
  bool rank_tracking = true;
  long sv_start = 5;
  long sv_step = 5;
  std::optional<double> alpha_clip;  // elementwise clip applied to the final output only
  std::optional<double> time_limit;  // seconds; exceeding it flags non-convergence
};

struct ApgOutput {
  Matrix m_hat;
  RecoveryReport report;
};

/// Minimizes 0.5 * sum_{Omega} (Y - M)^2 + mu ||M||_* by FISTA with
/// singular-value soft-thresholding; momentum restarts whenever the
/// objective would increase, so the objective trace is non-increasing.
ApgOutput solve_nuclear(const ObservationSet& obs, const ApgConfig& cfg);

/// Objective of the baseline at M.
double nuclear_objective(const AggregatedObservations& obs, const Matrix& m, double mu);

}  // namespace maxnorm

#endif  // MAXNORM_APG_HPP_
