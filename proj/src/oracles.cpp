#include "maxnorm/oracles.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <vector>

namespace maxnorm::oracles {

namespace {

Matrix eigen_clip_psd(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()));
  Vector lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

// Gradient (trace inner product, symmetric parametrization) of
// sum_obs (Y - Z12)^2 + mu tr(Z): each mirrored 12 position carries
// (count * z - sum).
void sdp_data_gradient(const AggregatedObservations& obs, double mu, const Matrix& z, Index d1,
                       Matrix* grad) {
  grad->setZero();
  grad->diagonal().setConstant(mu);
  for (const auto& cell : obs.cells) {
    const Index i = cell.row;
    const Index j = d1 + cell.col;
    const double g = cell.count * z(i, j) - cell.sum;
    (*grad)(i, j) += g;
    (*grad)(j, i) += g;
  }
}

double sdp_data_term(const AggregatedObservations& obs, const Matrix& z, Index d1) {
  double s = 0.0;
  for (const auto& cell : obs.cells) {
    const double v = z(cell.row, d1 + cell.col);
    s += cell.sumsq - 2.0 * v * cell.sum + cell.count * v * v;
  }
  return s;
}

void clip_block_inplace(Matrix& z, Index r0, Index c0, Index rows, Index cols, double lo,
                        double hi) {
  z.block(r0, c0, rows, cols) =
      z.block(r0, c0, rows, cols).cwiseMax(lo).cwiseMin(hi).eval();
}

}  // namespace

Vector proj_l1_ball(const Vector& v, double radius) {
  if (radius < 0.0) throw ArgumentError("proj_l1_ball: negative radius");
  const Index d = v.size();
  if (v.cwiseAbs().sum() <= radius) return v;
  std::vector<double> u(d);
  for (Index i = 0; i < d; ++i) u[i] = std::abs(v(i));
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cssv = 0.0;
  double theta = 0.0;
  Index rho_idx = 0;
  for (Index i = 0; i < d; ++i) {
    cssv += u[i];
    const double t = (cssv - radius) / static_cast<double>(i + 1);
    if (u[i] > t) {
      rho_idx = i;
      theta = t;
    }
  }
  (void)rho_idx;
  Vector out(d);
  for (Index i = 0; i < d; ++i) {
    const double mag = std::max(std::abs(v(i)) - theta, 0.0);
    out(i) = (v(i) >= 0.0 ? mag : -mag);
  }
  return out;
}

Vector moreau_linf_prox(const Vector& v, double beta) {
  return v - proj_l1_ball(v, beta);
}

double linf_prox_search_objective(const Vector& c, double beta) {
  const Vector a = c.cwiseAbs();
  auto g = [&](double m) {
    double s = beta * m;
    for (Index i = 0; i < a.size(); ++i) {
      const double excess = a(i) - m;
      if (excess > 0.0) s += 0.5 * excess * excess;
    }
    return s;
  };
  double lo = 0.0;
  double hi = (a.size() > 0) ? a.maxCoeff() : 0.0;
  for (int it = 0; it < 300; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (g(m1) <= g(m2))
      hi = m2;
    else
      lo = m1;
  }
  return g(0.5 * (lo + hi));
}

double zupdate_penalized_objective(const BlockSymMatrix& z, const BlockSymMatrix& c,
                                   const AggregatedObservations& obs, double lambda, double rho) {
  const Index d = z.dim();
  double data = 0.0;
  for (const auto& cell : obs.cells) {
    const double v = z.z12_entry(cell.row, cell.col);
    data += 0.5 * (cell.sumsq - 2.0 * v * cell.sum + cell.count * v * v);
  }
  const double diag_pen = lambda * z.diagonal().cwiseAbs().maxCoeff();
  // Quadratic coupling over the independent entries: diagonal once, each
  // off-diagonal pair once.
  double quad = 0.0;
  const Matrix diff = z.raw() - c.raw();
  for (Index i = 0; i < d; ++i)
    for (Index j = i; j < d; ++j) quad += diff(i, j) * diff(i, j);
  return data + diag_pen + 0.5 * rho * quad;
}

double zupdate_penalized_oracle(const BlockSymMatrix& c, const AggregatedObservations& obs,
                                double lambda, double alpha, double rho, int iters) {
  BlockSymMatrix z = c;
  Matrix z12 = z.z12();
  z12 = z12.cwiseMax(-alpha).cwiseMin(alpha);
  z.set_z12(z12);

  // Smooth part: data term + (rho/2)||.||^2 coupling. Per 12 entry the
  // curvature is count + rho, per diagonal entry rho.
  double lips = rho;
  for (const auto& cell : obs.cells) lips = std::max(lips, cell.count + rho);
  const double step = 1.0 / lips;

  for (int it = 0; it < iters; ++it) {
    Matrix g12 = rho * (Matrix(z.z12()) - Matrix(c.z12()));
    for (const auto& cell : obs.cells)
      g12(cell.row, cell.col) += cell.count * z.z12_entry(cell.row, cell.col) - cell.sum;
    Matrix z12_new = (Matrix(z.z12()) - step * g12).cwiseMax(-alpha).cwiseMin(alpha);
    z.set_z12(z12_new);

    Vector diag = z.diagonal();
    Vector gd = rho * (diag - c.diagonal());
    Vector prox_in = diag - step * gd;
    z.set_diagonal(moreau_linf_prox(prox_in, step * lambda));
  }
  // Off-diagonal 11/22 entries already equal C (their unconstrained optimum).
  return zupdate_penalized_objective(z, c, obs, lambda, rho);
}

double zupdate_constrained_objective(const BlockSymMatrix& z, const BlockSymMatrix& c,
                                     const AggregatedObservations& obs, double rho) {
  double data = 0.0;
  for (const auto& cell : obs.cells) {
    const double v = z.z12_entry(cell.row, cell.col);
    data += 0.5 * (cell.sumsq - 2.0 * v * cell.sum + cell.count * v * v);
  }
  double quad = 0.0;
  const Matrix diff = z.raw() - c.raw();
  const Index d = z.dim();
  for (Index i = 0; i < d; ++i)
    for (Index j = i; j < d; ++j) quad += diff(i, j) * diff(i, j);
  return data + 0.5 * rho * quad;
}

double zupdate_constrained_oracle(const BlockSymMatrix& c, const AggregatedObservations& obs,
                                  double R, double alpha, double rho, int iters) {
  const Index d1 = c.dim1();
  const Index d2 = c.dim2();
  const Index d = d1 + d2;
  BlockSymMatrix z = c;

  auto project = [&](BlockSymMatrix& m) {
    Matrix& raw = m.raw();
    clip_block_inplace(raw, 0, 0, d1, d1, -R, R);
    clip_block_inplace(raw, d1, d1, d2, d2, -R, R);
    Matrix z12 = m.z12();
    z12 = z12.cwiseMax(-alpha).cwiseMin(alpha);
    m.set_z12(z12);
    Vector diag = m.diagonal();
    for (Index i = 0; i < d; ++i) diag(i) = std::min(R, std::max(0.0, diag(i)));
    m.set_diagonal(diag);
  };
  project(z);

  double lips = rho;
  for (const auto& cell : obs.cells) lips = std::max(lips, cell.count + rho);
  const double step = 1.0 / lips;

  for (int it = 0; it < iters; ++it) {
    // Gradient over independent entries: data on the 12 block plus the
    // quadratic coupling everywhere.
    BlockSymMatrix g(d1, d2);
    g.raw() = rho * (z.raw() - c.raw());
    Matrix g12 = g.z12();
    for (const auto& cell : obs.cells)
      g12(cell.row, cell.col) += cell.count * z.z12_entry(cell.row, cell.col) - cell.sum;
    g.set_z12(g12);
    z.raw() -= step * g.raw();
    project(z);
  }
  return zupdate_constrained_objective(z, c, obs, rho);
}

double sdp_objective_penalized(const BlockSymMatrix& z, const AggregatedObservations& obs,
                               double lambda, double mu) {
  return sdp_data_term(obs, z.raw(), z.dim1()) +
         lambda * z.diagonal().cwiseAbs().maxCoeff() + mu * z.raw().trace();
}

double sdp_objective_constrained(const BlockSymMatrix& z, const AggregatedObservations& obs,
                                 double mu) {
  return sdp_data_term(obs, z.raw(), z.dim1()) + mu * z.raw().trace();
}

SdpOracleResult sdp_oracle_penalized(const AggregatedObservations& obs, double lambda, double mu,
                                     double alpha, long iters) {
  const Index d1 = obs.d1;
  const Index d2 = obs.d2;
  const Index d = d1 + d2;
  double lips = 1.0;
  for (const auto& cell : obs.cells) lips = std::max(lips, 2.0 * cell.count);
  const double gamma = 1.0 / lips;

  // Davis-Yin: f = lambda||diag||_inf + box on Z12, g = psd indicator,
  // h = data + mu tr.
  auto prox_f = [&](const Matrix& v) {
    Matrix out = v;
    Matrix z12 = out.topRightCorner(d1, d2).cwiseMax(-alpha).cwiseMin(alpha);
    out.topRightCorner(d1, d2) = z12;
    out.bottomLeftCorner(d2, d1) = z12.transpose();
    out.diagonal() = moreau_linf_prox(out.diagonal(), gamma * lambda);
    return out;
  };

  Matrix zbuf = Matrix::Zero(d, d);
  Matrix grad(d, d);
  Matrix xb(d, d), xa(d, d);
  for (long it = 0; it < iters; ++it) {
    xb = eigen_clip_psd(zbuf);
    sdp_data_gradient(obs, mu, xb, d1, &grad);
    xa = prox_f(2.0 * xb - zbuf - gamma * grad);
    zbuf += xa - xb;
  }
  xb = eigen_clip_psd(zbuf);

  SdpOracleResult res;
  res.z = BlockSymMatrix::from_data(d1, d2, 0.5 * (xb + xb.transpose()), 1e-6);
  res.objective = sdp_objective_penalized(res.z, obs, lambda, mu);
  return res;
}

SdpOracleResult sdp_oracle_constrained(const AggregatedObservations& obs, double mu, double R,
                                       double alpha, long iters) {
  const Index d1 = obs.d1;
  const Index d2 = obs.d2;
  const Index d = d1 + d2;
  double lips = 1.0;
  for (const auto& cell : obs.cells) lips = std::max(lips, 2.0 * cell.count);
  const double gamma = 1.0 / lips;

  auto prox_f = [&](const Matrix& v) {
    Matrix out = v;
    clip_block_inplace(out, 0, 0, d1, d1, -R, R);
    clip_block_inplace(out, d1, d1, d2, d2, -R, R);
    Matrix z12 = out.topRightCorner(d1, d2).cwiseMax(-alpha).cwiseMin(alpha);
    out.topRightCorner(d1, d2) = z12;
    out.bottomLeftCorner(d2, d1) = z12.transpose();
    for (Index i = 0; i < d; ++i) out(i, i) = std::min(R, std::max(0.0, out(i, i)));
    return out;
  };

  Matrix zbuf = Matrix::Zero(d, d);
  Matrix grad(d, d);
  Matrix xb(d, d), xa(d, d);
  for (long it = 0; it < iters; ++it) {
    xb = eigen_clip_psd(zbuf);
    sdp_data_gradient(obs, mu, xb, d1, &grad);
    xa = prox_f(2.0 * xb - zbuf - gamma * grad);
    zbuf += xa - xb;
  }
  xb = eigen_clip_psd(zbuf);

  SdpOracleResult res;
  res.z = BlockSymMatrix::from_data(d1, d2, 0.5 * (xb + xb.transpose()), 1e-6);
  res.objective = sdp_objective_constrained(res.z, obs, mu);
  return res;
}

double nuclear_subgradient_oracle(const AggregatedObservations& obs, double mu, long iters) {
  const Index d1 = obs.d1;
  const Index d2 = obs.d2;
  Matrix m = Matrix::Zero(d1, d2);
  auto objective = [&](const Matrix& x) {
    double data = 0.0;
    for (const auto& cell : obs.cells) {
      const double v = x(cell.row, cell.col);
      data += cell.sumsq - 2.0 * v * cell.sum + cell.count * v * v;
    }
    Eigen::JacobiSVD<Matrix> svd(x);
    return 0.5 * data + mu * svd.singularValues().sum();
  };

  double best = objective(m);
  double scale = 0.0;
  for (const auto& cell : obs.cells) scale = std::max(scale, std::abs(cell.sum / cell.count));
  const double c0 = std::max(0.1, scale);

  Matrix grad(d1, d2);
  for (long it = 1; it <= iters; ++it) {
    grad.setZero();
    for (const auto& cell : obs.cells)
      grad(cell.row, cell.col) = cell.count * m(cell.row, cell.col) - cell.sum;
    if (mu > 0.0) {
      Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Vector& s = svd.singularValues();
      const double cut = (s.size() > 0) ? 1e-12 * std::max(1.0, s(0)) : 0.0;
      Index r = 0;
      for (Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) r = i + 1;
      if (r > 0)
        grad += mu * svd.matrixU().leftCols(r) * svd.matrixV().leftCols(r).transpose();
    }
    const double step = c0 / std::sqrt(static_cast<double>(it));
    m -= step * grad / std::max(1.0, grad.norm());
    best = std::min(best, objective(m));
  }
  return best;
}

}  // namespace maxnorm::oracles
