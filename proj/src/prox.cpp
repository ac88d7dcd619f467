#include "maxnorm/prox.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace maxnorm {

Vector linf_prox(const Vector& c, double beta) {
  if (beta < 0.0) throw ArgumentError("linf_prox: beta must be nonnegative");
  const Index d = c.size();
  if (d == 0) return c;
  if (beta == 0.0) return c;

  Vector mags = c.cwiseAbs();
  std::vector<double> a(mags.data(), mags.data() + d);
  std::sort(a.begin(), a.end(), std::greater<double>());

  // t_k = (sum_{i<=k} a_i - beta) / k; take the first k with
  // a_{k+1} < t_k <= a_k, otherwise k = d with t clamped at 0.
  double t_star = 0.0;
  bool found = false;
  double prefix = 0.0;
  for (Index k = 1; k <= d; ++k) {
    prefix += a[k - 1];
    const double t_k = (prefix - beta) / static_cast<double>(k);
    const double next = (k < d) ? a[k] : -std::numeric_limits<double>::infinity();
    if (k < d) {
      if (next < t_k && t_k <= a[k - 1]) {
        t_star = t_k;
        found = true;
        break;
      }
    } else {
      t_star = std::max(t_k, 0.0);
      found = true;
    }
  }
  (void)found;

  Vector z(d);
  for (Index i = 0; i < d; ++i) {
    const double s = (c(i) > 0.0) ? 1.0 : ((c(i) < 0.0) ? -1.0 : 0.0);
    z(i) = s * std::min(std::abs(c(i)), t_star);
  }
  return z;
}

BlockSymMatrix z_update_penalized(const BlockSymMatrix& c, const AggregatedObservations& obs,
                                  double lambda, double alpha, double rho) {
  if (rho <= 0.0) throw ArgumentError("z_update_penalized: rho must be positive");
  if (alpha <= 0.0) throw ArgumentError("z_update_penalized: alpha must be positive");
  if (lambda < 0.0) throw ArgumentError("z_update_penalized: lambda must be nonnegative");
  const Index d1 = c.dim1();
  const Index d2 = c.dim2();
  if (obs.d1 != d1 || obs.d2 != d2)
    throw ArgumentError("z_update_penalized: observation shape mismatch");

  BlockSymMatrix z = c;
  Matrix z12 = c.z12().cwiseMax(-alpha).cwiseMin(alpha);
  for (const auto& cell : obs.cells) {
    const double v = (cell.sum + rho * c.z12_entry(cell.row, cell.col)) / (cell.count + rho);
    z12(cell.row, cell.col) = clip(v, -alpha, alpha);
  }
  z.set_z12(z12);
  z.set_diagonal(linf_prox(c.diagonal(), lambda / rho));
  return z;
}

BlockSymMatrix z_update_constrained(const BlockSymMatrix& c, const AggregatedObservations& obs,
                                    double R, double alpha, double rho,
                                    ConstrainedDenominator denom) {
  if (rho <= 0.0) throw ArgumentError("z_update_constrained: rho must be positive");
  if (alpha <= 0.0) throw ArgumentError("z_update_constrained: alpha must be positive");
  if (R <= 0.0) throw ArgumentError("z_update_constrained: R must be positive");
  const Index d1 = c.dim1();
  const Index d2 = c.dim2();
  if (obs.d1 != d1 || obs.d2 != d2)
    throw ArgumentError("z_update_constrained: observation shape mismatch");

  BlockSymMatrix z(d1, d2);
  Matrix& out = z.raw();
  const Matrix& in = c.raw();

  out.topLeftCorner(d1, d1) = in.topLeftCorner(d1, d1).cwiseMax(-R).cwiseMin(R);
  out.bottomRightCorner(d2, d2) = in.bottomRightCorner(d2, d2).cwiseMax(-R).cwiseMin(R);

  Matrix z12 = c.z12().cwiseMax(-alpha).cwiseMin(alpha);
  for (const auto& cell : obs.cells) {
    const double c12 = c.z12_entry(cell.row, cell.col);
    double v;
    if (denom == ConstrainedDenominator::AsPrinted) {
      v = (cell.sum / cell.count + rho * c12) / rho;
    } else {
      v = (cell.sum + rho * c12) / (cell.count + rho);
    }
    z12(cell.row, cell.col) = clip(v, -alpha, alpha);
  }
  z.set_z12(z12);

  Vector diag = c.diagonal();
  for (Index i = 0; i < diag.size(); ++i) diag(i) = clip(diag(i), 0.0, R);
  z.set_diagonal(diag);
  return z;
}

}  // namespace maxnorm
