#ifndef MAXNORM_ADMM_HPP_
#define MAXNORM_ADMM_HPP_

#include <optional>
#include <utility>

#include "maxnorm/block_sym.hpp"
#include "maxnorm/matrix_core.hpp"
#include "maxnorm/prox.hpp"
#include "maxnorm/types.hpp"

namespace maxnorm {

enum class ResidualNormalization { Absolute, Relative };

/// Tuning knobs for the ADMM solvers. Exactly one of {lambda, R} must be
/// set: lambda drives the penalized solver, R the constrained one.
struct SolverConfig {
  std::optional<double> lambda;  // max-norm weight (penalized mode)
  double mu = 0.0;               // nuclear/trace weight
  double alpha = 1.0;            // elementwise bound on Z12
  std::optional<double> R;       // max-norm cap (constrained mode)

  double rho0 = 0.1;
  double tau = 1.618;            // must lie in (0, (1+sqrt(5))/2)
  double eta_tol = 1e-4;
  long max_iters = 200;

  long rho_adapt_period = 10;
  double rho_shrink = 0.7;
  double rho_grow = 1.3;
  double rho_min = 1e-6;
  double rho_max = 1e6;

  bool truncation = true;        // eigenvalue truncation inside the X-update
  double gap_factor = 2.0;
  double partial_fraction = 0.10;
  long full_eigen_iters = 5;     // initial phase with full decompositions

  ResidualNormalization residual_normalization = ResidualNormalization::Absolute;
  ConstrainedDenominator constrained_denominator = ConstrainedDenominator::OnePlusRho;
  std::optional<double> time_limit;  // seconds; exceeding it flags non-convergence

  void validate_penalized() const;
  void validate_constrained() const;
  void validate_common() const;
};

/// Current iterates of a run. X carries the PSD constraint, Z the box
/// constraints, W the (unscaled) dual.
struct SolverState {
  BlockSymMatrix X;
  BlockSymMatrix Z;
  BlockSymMatrix W;
  double rho = 0.1;
  long iter = 0;
  std::vector<double> primal_residuals;
  std::vector<double> dual_residuals;
  long rank_estimate = -1;
};

struct ResidualValues {
  double r_p = 0.0;
  double r_d = 0.0;
  double eta = 0.0;
};

/// Stopping quantities after an iteration: R_P = ||X - Z||_F and
/// R_D = max{ ||rho (Z_prev - Z) + W - W~||_F, ||W - W~||_F } with
/// W~ = W_prev + rho (X - Z); eta = max(R_P, R_D).
ResidualValues residuals(const SolverState& state, const BlockSymMatrix& z_prev, double tau,
                         ResidualNormalization norm = ResidualNormalization::Absolute);

/// rho <- 0.7 rho when R_P < 0.5 R_D, rho <- 1.3 rho when R_D < 0.5 R_P,
/// clamped to [rho_min, rho_max].
double adapt_rho(double rho, double r_p, double r_d, const SolverConfig& cfg);

/// Objective the penalized iteration drives to its minimum:
/// sum over observations (Y - Z12)^2 + lambda ||diag Z||_inf + mu tr(Z).
/// The data-term weight matches the observed-entry Z-update (Y + rho C)/(1 + rho).
double penalized_objective(const AggregatedObservations& obs, const BlockSymMatrix& z,
                           double lambda, double mu);

/// Constrained counterpart: sum (Y - Z12)^2 + mu tr(Z).
double constrained_objective(const AggregatedObservations& obs, const BlockSymMatrix& z,
                             double mu);

struct SolveOutput {
  Matrix m_hat;           // recovered d1 x d2 matrix (the final Z12 block)
  RecoveryReport report;
  BlockSymMatrix z_final;
  BlockSymMatrix x_final;
};

/// Penalized hybrid solver (lambda * max-norm + mu * trace on the SDP lift).
SolveOutput solve_penalized(const ObservationSet& obs, const SolverConfig& cfg);

/// Constrained solver (diag box [0, R] replaces the diagonal penalty).
SolveOutput solve_constrained(const ObservationSet& obs, const SolverConfig& cfg);

}  // namespace maxnorm

#endif  // MAXNORM_ADMM_HPP_
