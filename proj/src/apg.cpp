#include "maxnorm/apg.hpp"

#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <sstream>

#include "maxnorm/matrix_core.hpp"

namespace maxnorm {

namespace {

void add_masked_gradient(const AggregatedObservations& obs, const Matrix& m, Matrix* grad) {
  grad->setZero();
  for (const auto& cell : obs.cells)
    (*grad)(cell.row, cell.col) = cell.count * m(cell.row, cell.col) - cell.sum;
}

// Soft-threshold keeping at most `cap` leading components (cap < 0: no cap).
// `rank_out` reports the thresholded rank within the working window, the
// count a solver computing only `cap` triplets would observe.
Matrix svt_capped(const Matrix& m, double mu, long cap, long* rank_out) {
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  long rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > mu) rank = i + 1;
  const long keep = (cap >= 0) ? std::min(rank, cap) : rank;
  *rank_out = keep;
  if (keep == 0) return Matrix::Zero(m.rows(), m.cols());
  Vector kept = s.head(keep).array() - mu;
  return svd.matrixU().leftCols(keep) * kept.asDiagonal() *
         svd.matrixV().leftCols(keep).transpose();
}

}  // namespace

double nuclear_objective(const AggregatedObservations& obs, const Matrix& m, double mu) {
  double data = 0.0;
  for (const auto& cell : obs.cells) {
    const double v = m(cell.row, cell.col);
    data += cell.sumsq - 2.0 * v * cell.sum + cell.count * v * v;
  }
  double nuc = 0.0;
  if (mu > 0.0) {
    Eigen::BDCSVD<Matrix> svd(m);
    nuc = svd.singularValues().sum();
  }
  return 0.5 * data + mu * nuc;
}

ApgOutput solve_nuclear(const ObservationSet& obs, const ApgConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  if (obs.empty()) throw ArgumentError("solve_nuclear: empty observation set");
  if (cfg.mu < 0.0) throw ArgumentError("solve_nuclear: mu must be nonnegative");

  const AggregatedObservations agg = AggregatedObservations::from(obs);
  const Index d1 = obs.d1;
  const Index d2 = obs.d2;
  const double step = 1.0 / std::max(1.0, agg.max_count);

  double mu_path = cfg.mu;
  if (cfg.continuation && cfg.mu > 0.0) {
    Eigen::BDCSVD<Matrix> svd(obs.zero_filled());
    mu_path = std::max(cfg.mu, cfg.mu0_fraction * svd.singularValues()(0));
  }

  Matrix m_prev = Matrix::Zero(d1, d2);
  Matrix m_cur = m_prev;
  Matrix p = m_prev;  // extrapolation point
  Matrix grad(d1, d2);
  double t_momentum = 1.0;
  double obj_prev = nuclear_objective(agg, m_prev, cfg.mu);

  RecoveryReport report;
  report.method = "nuclear";
  bool converged = false;
  long iters_done = 0;

  long sv = cfg.rank_tracking ? std::min<long>(cfg.sv_start, std::min(d1, d2)) : -1;

  for (long iter = 0; iter < cfg.max_iters; ++iter) {
    const bool at_target = (mu_path <= cfg.mu);
    add_masked_gradient(agg, p, &grad);
    long svp = 0;
    Matrix candidate = svt_capped(p - step * grad, mu_path * step, sv, &svp);
    double obj = nuclear_objective(agg, candidate, cfg.mu);

    if (at_target && obj > obj_prev) {
      // Monotone restart: plain proximal step from the last iterate.
      add_masked_gradient(agg, m_cur, &grad);
      candidate = svt_capped(m_cur - step * grad, mu_path * step, sv, &svp);
      obj = nuclear_objective(agg, candidate, cfg.mu);
      t_momentum = 1.0;
    }
    if (cfg.rank_tracking)
      sv = (svp < sv) ? svp + 1 : std::min<long>(svp + cfg.sv_step, std::min(d1, d2));
    if (!std::isfinite(obj)) throw SolverError("APG produced a non-finite objective", iter);

    m_prev = std::move(m_cur);
    m_cur = std::move(candidate);

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
    p = m_cur + ((t_momentum - 1.0) / t_next) * (m_cur - m_prev);
    t_momentum = t_next;

    const double rel_change = (m_cur - m_prev).norm() / std::max(1.0, m_prev.norm());
    report.primal_residuals.push_back(rel_change);
    report.eta_trace.push_back(obj);
    obj_prev = obj;
    iters_done = iter + 1;

    // Stopping is evaluated on every iteration, continuation phase included;
    // under strongly non-uniform sampling the cold region's progress per
    // iteration can die out long before the threshold path bottoms out.
    if (rel_change <= cfg.rel_change_tol) {
      converged = true;
      break;
    }
    mu_path = std::max(cfg.continuation_factor * mu_path, cfg.mu);
    if (cfg.time_limit &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count() >
            *cfg.time_limit)
      break;
  }

  if (cfg.alpha_clip.has_value()) {
    const double a = *cfg.alpha_clip;
    m_cur = m_cur.cwiseMax(-a).cwiseMin(a);
  }

  ApgOutput out;
  out.m_hat = m_cur;
  report.iterations = iters_done;
  report.converged = converged;
  report.objective = nuclear_objective(agg, m_cur, cfg.mu);
  {
    Eigen::BDCSVD<Matrix> svd(m_cur);
    const Vector& s = svd.singularValues();
    long r = 0;
    if (s.size() > 0 && s(0) > 0.0)
      for (Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-8 * s(0)) ++r;
    report.rank_estimate = r;
  }
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  {
    std::ostringstream ss;
    ss << "mode=nuclear mu=" << cfg.mu << " max_iters=" << cfg.max_iters
       << " rel_change_tol=" << cfg.rel_change_tol;
    report.config_summary = ss.str();
  }
  out.report = report;
  return out;
}

}  // namespace maxnorm
