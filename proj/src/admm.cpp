#include "maxnorm/admm.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace maxnorm {

namespace {

constexpr double kTauUpper = 1.6180339887498949;  // (1 + sqrt(5)) / 2

double data_term(const AggregatedObservations& obs, const BlockSymMatrix& z) {
  double s = 0.0;
  for (const auto& cell : obs.cells) {
    const double v = z.z12_entry(cell.row, cell.col);
    s += cell.sumsq - 2.0 * v * cell.sum + cell.count * v * v;
  }
  return s;
}

ResidualValues compute_residuals(const BlockSymMatrix& x, const BlockSymMatrix& z,
                                 const BlockSymMatrix& z_prev, const BlockSymMatrix& w,
                                 const BlockSymMatrix& w_tilde, double rho,
                                 ResidualNormalization norm) {
  ResidualValues r;
  r.r_p = (x.raw() - z.raw()).norm();
  const Matrix d = w.raw() - w_tilde.raw();
  const double term1 = (rho * (z_prev.raw() - z.raw()) + d).norm();
  const double term2 = d.norm();
  r.r_d = std::max(term1, term2);
  if (norm == ResidualNormalization::Relative) {
    const double scale = 1.0 + z.raw().norm();
    r.r_p /= scale;
    r.r_d /= scale;
  }
  r.eta = std::max(r.r_p, r.r_d);
  return r;
}

enum class Mode { Penalized, Constrained };

SolveOutput run_admm(const ObservationSet& obs, const SolverConfig& cfg, Mode mode) {
  const auto t_start = std::chrono::steady_clock::now();
  if (obs.empty()) throw ArgumentError("solver: empty observation set");
  cfg.validate_common();
  if (mode == Mode::Penalized)
    cfg.validate_penalized();
  else
    cfg.validate_constrained();

  const AggregatedObservations agg = AggregatedObservations::from(obs);
  const Index d1 = obs.d1;
  const Index d2 = obs.d2;
  const Index d = d1 + d2;
  const double lambda = (mode == Mode::Penalized) ? *cfg.lambda : 0.0;
  const double cap = (mode == Mode::Constrained) ? *cfg.R : 0.0;

  BlockSymMatrix x(d1, d2), z(d1, d2), w(d1, d2);
  double rho = cfg.rho0;

  RecoveryReport report;
  report.method = (mode == Mode::Penalized) ? "penalized" : "constrained";
  report.primal_residuals.reserve(cfg.max_iters);
  report.dual_residuals.reserve(cfg.max_iters);
  report.eta_trace.reserve(cfg.max_iters);

  PsdProjectOptions popts;
  popts.truncation = cfg.truncation;
  popts.gap_factor = cfg.gap_factor;
  popts.partial_fraction = cfg.partial_fraction;

  Matrix warm_basis;
  long prev_rank = -1;
  double best_eta = std::numeric_limits<double>::infinity();
  BlockSymMatrix best_z = z;
  BlockSymMatrix best_x = x;
  bool converged = false;
  long iters_done = 0;
  double max_identity_gap = 0.0;

  const Matrix mu_eye = cfg.mu * Matrix::Identity(d, d);

  for (long iter = 0; iter < cfg.max_iters; ++iter) {
    // X-update: project Z - rho^{-1} (W + mu I) onto the PSD cone.
    BlockSymMatrix g(d1, d2);
    g.raw() = z.raw() - (w.raw() + mu_eye) / rho;
    g.symmetrize();

    std::optional<Index> hint;
    if (iter >= cfg.full_eigen_iters && prev_rank >= 0) hint = prev_rank;
    popts.warm_basis = (warm_basis.size() > 0) ? &warm_basis : nullptr;
    PsdProjectionInfo pinfo;
    BlockSymMatrix x_new = project_psd(g, hint, popts, &pinfo);
    warm_basis = pinfo.basis;
    prev_rank = pinfo.kept_rank;

    // Z-update: prox over the box-constrained set at C = X + rho^{-1} W.
    BlockSymMatrix c(d1, d2);
    c.raw() = x_new.raw() + w.raw() / rho;
    c.symmetrize();
    BlockSymMatrix z_new =
        (mode == Mode::Penalized)
            ? z_update_penalized(c, agg, lambda, cfg.alpha, rho)
            : z_update_constrained(c, agg, cap, cfg.alpha, rho, cfg.constrained_denominator);

    // Dual ascent with step tau, plus the unit-step multiplier W~ used by
    // the stopping rule.
    const Matrix diff = x_new.raw() - z_new.raw();
    BlockSymMatrix w_tilde(d1, d2);
    w_tilde.raw() = w.raw() + rho * diff;
    BlockSymMatrix w_new(d1, d2);
    w_new.raw() = w.raw() + cfg.tau * rho * diff;
    w_new.symmetrize();

    const double identity_gap =
        ((w_new.raw() - w_tilde.raw()) - (cfg.tau - 1.0) * rho * diff).norm();
    max_identity_gap = std::max(max_identity_gap, identity_gap);

    ResidualValues res = compute_residuals(x_new, z_new, z, w_new, w_tilde, rho,
                                           cfg.residual_normalization);
    report.primal_residuals.push_back(res.r_p);
    report.dual_residuals.push_back(res.r_d);
    report.eta_trace.push_back(res.eta);

    if (!std::isfinite(res.eta))
      throw SolverError("ADMM produced a non-finite residual", iter);

    x = std::move(x_new);
    z = std::move(z_new);
    w = std::move(w_new);
    iters_done = iter + 1;

    if (res.eta < best_eta) {
      best_eta = res.eta;
      best_z = z;
      best_x = x;
    }

    if (res.eta <= cfg.eta_tol) {
      converged = true;
      break;
    }
    if ((iter + 1) % cfg.rho_adapt_period == 0) {
      rho = adapt_rho(rho, res.r_p, res.r_d, cfg);
    }
    if (cfg.time_limit &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count() >
            *cfg.time_limit)
      break;
  }

  const BlockSymMatrix& z_out = converged ? z : best_z;
  const BlockSymMatrix& x_out = converged ? x : best_x;

  SolveOutput out;
  out.m_hat = z_out.z12();
  out.z_final = z_out;
  out.x_final = x_out;
  report.iterations = iters_done;
  report.converged = converged;
  report.final_eta = converged ? report.eta_trace.back() : best_eta;
  report.rank_estimate = prev_rank;
  report.max_dual_identity_gap = max_identity_gap;
  report.objective = (mode == Mode::Penalized)
                         ? penalized_objective(agg, z_out, lambda, cfg.mu)
                         : constrained_objective(agg, z_out, cfg.mu);
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  {
    std::ostringstream ss;
    ss << "mode=" << report.method << " lambda=" << lambda;
    if (mode == Mode::Constrained) ss << " R=" << cap;
    ss << " mu=" << cfg.mu << " alpha=" << cfg.alpha << " rho0=" << cfg.rho0
       << " tau=" << cfg.tau << " eta_tol=" << cfg.eta_tol << " max_iters=" << cfg.max_iters
       << " truncation=" << (cfg.truncation ? 1 : 0);
    report.config_summary = ss.str();
  }
  out.report = std::move(report);
  return out;
}

}  // namespace

void SolverConfig::validate_common() const {
  if (tau <= 0.0 || tau >= kTauUpper + 1e-12)
    throw ArgumentError("SolverConfig: tau must lie in (0, (1+sqrt(5))/2)");
  if (rho0 <= 0.0) throw ArgumentError("SolverConfig: rho0 must be positive");
  if (alpha <= 0.0) throw ArgumentError("SolverConfig: alpha must be positive");
  if (mu < 0.0) throw ArgumentError("SolverConfig: mu must be nonnegative");
  if (max_iters < 1) throw ArgumentError("SolverConfig: max_iters must be positive");
  if (rho_adapt_period < 1) throw ArgumentError("SolverConfig: rho_adapt_period must be positive");
}

void SolverConfig::validate_penalized() const {
  if (!lambda.has_value())
    throw ArgumentError("SolverConfig: penalized mode requires lambda");
  if (R.has_value())
    throw ArgumentError("SolverConfig: exactly one of lambda / R may drive a run");
  if (*lambda < 0.0) throw ArgumentError("SolverConfig: lambda must be nonnegative");
}

void SolverConfig::validate_constrained() const {
  if (!R.has_value())
    throw ArgumentError("SolverConfig: constrained mode requires R");
  if (lambda.has_value())
    throw ArgumentError("SolverConfig: exactly one of lambda / R may drive a run");
  if (*R <= 0.0) throw ArgumentError("SolverConfig: R must be positive");
}

ResidualValues residuals(const SolverState& state, const BlockSymMatrix& z_prev, double tau,
                         ResidualNormalization norm) {
  // Recover W_prev from the dual step, then W~ = W_prev + rho (X - Z).
  const Matrix diff = state.X.raw() - state.Z.raw();
  BlockSymMatrix w_tilde(state.Z.dim1(), state.Z.dim2());
  w_tilde.raw() = state.W.raw() - tau * state.rho * diff + state.rho * diff;
  return compute_residuals(state.X, state.Z, z_prev, state.W, w_tilde, state.rho, norm);
}

double adapt_rho(double rho, double r_p, double r_d, const SolverConfig& cfg) {
  if (r_p < 0.5 * r_d)
    rho *= cfg.rho_shrink;
  else if (r_d < 0.5 * r_p)
    rho *= cfg.rho_grow;
  return std::min(cfg.rho_max, std::max(cfg.rho_min, rho));
}

double penalized_objective(const AggregatedObservations& obs, const BlockSymMatrix& z,
                           double lambda, double mu) {
  const double diag_inf = z.diagonal().cwiseAbs().maxCoeff();
  return data_term(obs, z) + lambda * diag_inf + mu * z.raw().trace();
}

double constrained_objective(const AggregatedObservations& obs, const BlockSymMatrix& z,
                             double mu) {
  return data_term(obs, z) + mu * z.raw().trace();
}

SolveOutput solve_penalized(const ObservationSet& obs, const SolverConfig& cfg) {
  return run_admm(obs, cfg, Mode::Penalized);
}

SolveOutput solve_constrained(const ObservationSet& obs, const SolverConfig& cfg) {
  return run_admm(obs, cfg, Mode::Constrained);
}

}  // namespace maxnorm
