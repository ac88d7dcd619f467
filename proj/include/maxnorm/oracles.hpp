#ifndef MAXNORM_ORACLES_HPP_
#define MAXNORM_ORACLES_HPP_

#include "maxnorm/block_sym.hpp"
#include "maxnorm/types.hpp"

namespace maxnorm::oracles {

/// Euclidean projection onto the l1 ball of the given radius (sort-based).
Vector proj_l1_ball(const Vector& v, double radius);

/// l-inf prox through the Moreau identity: v - proj_l1_ball(v, beta).
Vector moreau_linf_prox(const Vector& v, double beta);

/// Solves min_z beta ||z||_inf + 0.5 ||c - z||^2 by ternary search over the
/// clip level m = ||z||_inf; the inner minimum is g(m) = beta m +
/// 0.5 sum (|c_i| - m)_+^2, convex in m.
double linf_prox_search_objective(const Vector& c, double beta);

/// Objective of the penalized Z-subproblem at Z, counting each independent
/// entry of the symmetric matrix once (diagonal, upper 11/22 triangles, and
/// the 12 block):
///   0.5 sum_obs (Y - Z12)^2 + lambda ||diag Z||_inf
///   + (rho/2) * ||Z - C||^2_{upper}.
double zupdate_penalized_objective(const BlockSymMatrix& z, const BlockSymMatrix& c,
                                   const AggregatedObservations& obs, double lambda, double rho);

/// Proximal-gradient solve of the penalized Z-subproblem over
/// {||Z12||_inf <= alpha}; the diagonal prox goes through the l1-ball
/// projection, not the closed form under test.
double zupdate_penalized_oracle(const BlockSymMatrix& c, const AggregatedObservations& obs,
                                double lambda, double alpha, double rho, int iters = 4000);

/// Constrained counterpart (box feasible set, no diagonal penalty).
double zupdate_constrained_objective(const BlockSymMatrix& z, const BlockSymMatrix& c,
                                     const AggregatedObservations& obs, double rho);
double zupdate_constrained_oracle(const BlockSymMatrix& c, const AggregatedObservations& obs,
                                  double R, double alpha, double rho, int iters = 4000);

/// Objective the penalized ADMM drives to its minimum, evaluated at Z:
/// sum_obs (Y - Z12)^2 + lambda ||diag Z||_inf + mu tr(Z).
double sdp_objective_penalized(const BlockSymMatrix& z, const AggregatedObservations& obs,
                               double lambda, double mu);
double sdp_objective_constrained(const BlockSymMatrix& z, const AggregatedObservations& obs,
                                 double mu);

struct SdpOracleResult {
  BlockSymMatrix z;
  double objective = 0.0;
};

/// Long-horizon three-operator splitting (Davis-Yin) on the penalized SDP
/// over {Z psd, ||Z12||_inf <= alpha}. Entirely separate iteration from the
/// ADMM under test; the diagonal prox uses the l1-ball route.
SdpOracleResult sdp_oracle_penalized(const AggregatedObservations& obs, double lambda, double mu,
                                     double alpha, long iters = 200000);

/// Same splitting for the constrained feasible set
/// {Z psd, diag in [0,R], ||Z11||,||Z22|| <= R, ||Z12|| <= alpha}.
SdpOracleResult sdp_oracle_constrained(const AggregatedObservations& obs, double mu, double R,
                                       double alpha, long iters = 200000);

/// Long-horizon subgradient descent on the nuclear-norm objective
/// 0.5 sum_obs (Y - M)^2 + mu ||M||_*; returns the best objective seen.
double nuclear_subgradient_oracle(const AggregatedObservations& obs, double mu, long iters = 400000);

}  // namespace maxnorm::oracles

#endif  // MAXNORM_ORACLES_HPP_
