#include "maxnorm/matrix_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <random>

namespace maxnorm {

namespace {

EigenDecomposition descending(const Eigen::SelfAdjointEigenSolver<Matrix>& es) {
  EigenDecomposition out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  return out;
}

// Lanczos with full reorthogonalization, targeting the top of the spectrum.
// In top-k mode it resolves the k largest eigenpairs; in positives mode it
// keeps extending the Krylov space until every positive eigenvalue is
// resolved and a non-positive Ritz value witnesses the end of the positive
// part. Returns false when m_max is hit first (callers fall back to a full
// decomposition).
bool lanczos_top(const Matrix& a, Index k_want, bool positives_mode, double res_tol,
                 const Matrix* warm, EigenDecomposition* out) {
  const Index d = a.rows();
  const Index m_max = std::min<Index>(d, std::max<Index>(4 * k_want + 80, 120));

  Matrix basis(d, m_max);
  Vector diag(m_max), offdiag(m_max);
  Vector v0;
  if (warm != nullptr && warm->rows() == d && warm->cols() > 0) {
    v0 = warm->rowwise().sum();
  }
  if (v0.size() != d || v0.norm() < 1e-12) {
    std::mt19937_64 gen(0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> nd;
    v0.resize(d);
    for (Index i = 0; i < d; ++i) v0(i) = nd(gen);
  }
  basis.col(0) = v0 / v0.norm();

  std::mt19937_64 restart_gen(0x853c49e6748fea9bull);
  std::normal_distribution<double> restart_nd;
  const double breakdown_tol = 1e-13 * std::max(1.0, a.cwiseAbs().maxCoeff());

  Vector w_vec(d);
  Index m = 0;
  double last_beta = 0.0;
  while (m < m_max) {
    const Index j = m;
    w_vec.noalias() = a * basis.col(j);
    diag(j) = basis.col(j).dot(w_vec);
    for (int pass = 0; pass < 2; ++pass) {
      Vector proj = basis.leftCols(j + 1).transpose() * w_vec;
      w_vec.noalias() -= basis.leftCols(j + 1) * proj;
    }
    last_beta = w_vec.norm();
    ++m;

    if (m < m_max) {
      if (last_beta <= breakdown_tol) {
        // Invariant subspace found; continue in its orthogonal complement.
        Vector fresh(d);
        for (Index i = 0; i < d; ++i) fresh(i) = restart_nd(restart_gen);
        for (int pass = 0; pass < 2; ++pass) {
          Vector proj = basis.leftCols(m).transpose() * fresh;
          fresh.noalias() -= basis.leftCols(m) * proj;
        }
        if (fresh.norm() <= 1e-12) break;  // basis already spans everything
        offdiag(j) = 0.0;
        basis.col(m) = fresh / fresh.norm();
        last_beta = 0.0;
      } else {
        offdiag(j) = last_beta;
        basis.col(m) = w_vec / last_beta;
      }
    }

    const bool time_to_check =
        (m >= std::max<Index>(k_want + 2, 8) && (m % 8 == 0 || m == m_max)) || m == d;
    if (!time_to_check) continue;

    Matrix t = Matrix::Zero(m, m);
    for (Index i = 0; i < m; ++i) {
      t(i, i) = diag(i);
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = offdiag(i);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> small(t);
    if (small.info() != Eigen::Success) return false;
    Vector theta = small.eigenvalues().reverse();
    Matrix s = small.eigenvectors().rowwise().reverse();
    const double beta_m = (m < m_max) ? offdiag(m - 1) : last_beta;
    auto residual_of = [&](Index i) { return std::abs(beta_m * s(m - 1, i)); };

    Index need = 0;
    bool have_witness = false;
    if (positives_mode) {
      while (need < m && theta(need) > 0.0) ++need;
      have_witness = (need < m) || (m == d);
    } else {
      need = std::min(k_want, m);
      have_witness = (m >= k_want) || (m == d);
    }
    if (!have_witness) continue;

    bool resolved = (m == d);
    if (!resolved) {
      resolved = true;
      for (Index i = 0; i < need; ++i) {
        if (residual_of(i) > res_tol) {
          resolved = false;
          break;
        }
      }
      if (resolved && positives_mode && need < m && residual_of(need) > 100.0 * res_tol)
        resolved = false;
    }
    if (!resolved) {
      if (m == m_max) return false;
      continue;
    }

    const Index take = positives_mode ? std::min<Index>(need + 1, m) : need;
    out->eigenvalues = theta.head(take);
    out->eigenvectors = basis.leftCols(m) * s.leftCols(take);
    return true;
  }
  return false;
}

// Keep rule: retain the dominant group, the positive eigenvalues within a
// factor gap_factor of lambda_1. When a sharper ratio gap (>= gap_ratio)
// occurs inside that group, cut there instead.
Index apply_truncation(const Vector& eigs_desc, Index positive_count,
                       const PsdProjectOptions& opts) {
  if (!opts.truncation || positive_count <= 1) return positive_count;
  const double lambda1 = eigs_desc(0);
  if (lambda1 <= 0.0) return positive_count;
  Index keep = positive_count;
  for (Index i = 0; i < positive_count; ++i) {
    if (eigs_desc(i) < lambda1 / opts.gap_factor) {
      keep = i;
      break;
    }
  }
  if (keep < 1) keep = 1;
  for (Index i = 0; i + 1 < keep; ++i) {
    if (eigs_desc(i + 1) <= 0.0 || eigs_desc(i) / eigs_desc(i + 1) >= opts.gap_ratio) {
      keep = i + 1;
      break;
    }
  }
  return keep;
}

}  // namespace

EigenDecomposition full_eigen(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) throw SolverError("eigendecomposition failed");
  return descending(es);
}

EigenDecomposition partial_eigen(const BlockSymMatrix& a, Index k, const Matrix* warm_basis) {
  const Index d = a.dim();
  if (k < 1 || k > d) throw ArgumentError("partial_eigen: k out of range");
  if (!a.is_symmetric()) throw ContractViolation("partial_eigen: input not symmetric");
  if (k == d) return full_eigen(a.raw());

  const double scale = std::max(1.0, a.raw().cwiseAbs().maxCoeff());
  EigenDecomposition out;
  if (lanczos_top(a.raw(), k, false, 1e-10 * scale, warm_basis, &out)) return out;

  EigenDecomposition full = full_eigen(a.raw());
  out.eigenvalues = full.eigenvalues.head(k);
  out.eigenvectors = full.eigenvectors.leftCols(k);
  return out;
}

BlockSymMatrix project_psd(const BlockSymMatrix& a, std::optional<Index> rank_hint,
                           const PsdProjectOptions& opts, PsdProjectionInfo* info) {
  const Index d = a.dim();
  if (!a.is_symmetric()) throw ContractViolation("project_psd: input not symmetric");

  const double scale = std::max(1.0, a.raw().cwiseAbs().maxCoeff());
  Vector eigs;
  Matrix vecs;
  bool solved = false;
  bool used_partial = false;

  const bool try_partial =
      rank_hint.has_value() && *rank_hint >= 0 &&
      static_cast<double>(*rank_hint) < opts.partial_fraction * static_cast<double>(d);

  if (try_partial && opts.truncation) {
    // Only the dominant kept group is needed; resolve top-k pairs and grow k
    // until the truncation cut falls strictly inside the computed block.
    Index k = std::min<Index>(d, std::max<Index>(*rank_hint, 1) + 8);
    const Index k_cap = std::min<Index>(
        d, static_cast<Index>(opts.partial_fraction * static_cast<double>(d)) + 16);
    while (k <= k_cap && k < d) {
      EigenDecomposition part;
      if (!lanczos_top(a.raw(), k, false, 1e-7 * scale, opts.warm_basis, &part)) break;
      Index pos = 0;
      for (Index i = 0; i < part.eigenvalues.size() && part.eigenvalues(i) > 0.0; ++i) ++pos;
      const Index keep = apply_truncation(part.eigenvalues, pos, opts);
      if (pos < k || keep < k) {
        eigs = part.eigenvalues;
        vecs = part.eigenvectors;
        solved = true;
        used_partial = true;
        break;
      }
      k = std::min<Index>(d, 2 * k);
    }
  } else if (try_partial) {
    const Index k = std::max<Index>(*rank_hint, 1) + 8;
    EigenDecomposition part;
    if (lanczos_top(a.raw(), k, true, 1e-9 * scale, opts.warm_basis, &part)) {
      eigs = part.eigenvalues;
      vecs = part.eigenvectors;
      solved = true;
      used_partial = true;
    }
  }

  if (!solved) {
    EigenDecomposition full = full_eigen(a.raw());
    eigs = full.eigenvalues;
    vecs = full.eigenvectors;
  }

  Index positive_count = 0;
  for (Index i = 0; i < eigs.size() && eigs(i) > 0.0; ++i) ++positive_count;
  const Index keep = apply_truncation(eigs, positive_count, opts);

  BlockSymMatrix out(a.dim1(), a.dim2());
  if (keep > 0) {
    auto v = vecs.leftCols(keep);
    out.raw() = v * eigs.head(keep).asDiagonal() * v.transpose();
    out.symmetrize();
  }
  if (info != nullptr) {
    info->kept_rank = keep;
    info->positive_count = positive_count;
    info->used_partial = used_partial;
    info->basis = (keep > 0) ? Matrix(vecs.leftCols(keep)) : Matrix();
  }
  return out;
}

Matrix svt(const Matrix& m, double mu) {
  if (mu < 0.0) throw ArgumentError("svt: negative threshold");
  if (mu == 0.0) return m;
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector s = svd.singularValues();
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) {
    s(i) = std::max(s(i) - mu, 0.0);
    if (s(i) > 0.0) r = i + 1;
  }
  if (r == 0) return Matrix::Zero(m.rows(), m.cols());
  return svd.matrixU().leftCols(r) * s.head(r).asDiagonal() *
         svd.matrixV().leftCols(r).transpose();
}

long numerical_rank(const Vector& eigenvalues, double rel_tol) {
  if (eigenvalues.size() == 0) return 0;
  const double lambda1 = eigenvalues.maxCoeff();
  if (lambda1 <= 0.0) return 0;
  long r = 0;
  for (Index i = 0; i < eigenvalues.size(); ++i)
    if (eigenvalues(i) > rel_tol * lambda1) ++r;
  return r;
}

}  // namespace maxnorm
