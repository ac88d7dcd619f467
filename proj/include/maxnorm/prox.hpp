#ifndef MAXNORM_PROX_HPP_
#define MAXNORM_PROX_HPP_

#include <algorithm>
#include <cmath>

#include "maxnorm/block_sym.hpp"
#include "maxnorm/types.hpp"

namespace maxnorm {

/// Exact minimizer of beta*||z||_inf + 0.5*||c - z||_2^2 for arbitrary signs
/// and ordering. The sorted-nonnegative case reduces to clipping at a level
/// t*: z_i = sign(c_i) * min(|c_i|, t*).
Vector linf_prox(const Vector& c, double beta);

/// Which denominator the constrained observed-entry update uses. AsPrinted
/// divides by rho; OnePlusRho divides by (count + rho), which is the exact
/// minimizer of the quadratic subproblem and the form the constrained solver
/// defaults to.
enum class ConstrainedDenominator { AsPrinted, OnePlusRho };

/// Z-subproblem of the penalized ADMM: block-wise minimizer of
/// L(Z) + (rho/2)||Z - C||^2 over {||Z12||_inf <= alpha}. Observed 12-block
/// entries move toward the data, unobserved ones are clipped, off-diagonal
/// 11/22 entries copy C, and the diagonal takes the l-inf prox with
/// beta = lambda / rho.
BlockSymMatrix z_update_penalized(const BlockSymMatrix& c, const AggregatedObservations& obs,
                                  double lambda, double alpha, double rho);

/// Z-subproblem of the constrained ADMM over
/// {diag(Z) in [0,R], ||Z11||_inf <= R, ||Z22||_inf <= R, ||Z12||_inf <= alpha}.
BlockSymMatrix z_update_constrained(const BlockSymMatrix& c, const AggregatedObservations& obs,
                                    double R, double alpha, double rho,
                                    ConstrainedDenominator denom = ConstrainedDenominator::AsPrinted);

inline double clip(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

}  // namespace maxnorm

#endif  // MAXNORM_PROX_HPP_
