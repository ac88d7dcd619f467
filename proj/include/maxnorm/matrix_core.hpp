#ifndef MAXNORM_MATRIX_CORE_HPP_
#define MAXNORM_MATRIX_CORE_HPP_

#include <optional>

#include "maxnorm/block_sym.hpp"
#include "maxnorm/types.hpp"

namespace maxnorm {

/// Eigenpairs sorted by descending eigenvalue; eigenvectors are the columns.
struct EigenDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;

  Matrix reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
  }
};

/// Controls for the PSD projection inside the ADMM X-update.
struct PsdProjectOptions {
  bool truncation = false;     // drop small positive eigenvalues (see keep rule)
  double gap_factor = 2.0;     // keep lambda_i >= lambda_1 / gap_factor
  double gap_ratio = 10.0;     // sharpen the cut at a >=10x drop inside the kept group
  double partial_fraction = 0.10;  // partial eigensolver when hint < fraction * d
  const Matrix* warm_basis = nullptr;  // subspace guess carried across iterations
};

struct PsdProjectionInfo {
  long kept_rank = 0;       // eigenpairs used in the reconstruction
  long positive_count = 0;  // positive eigenvalues found (pre-truncation)
  bool used_partial = false;
  Matrix basis;             // kept eigenvectors, reusable as next warm start
};

/// Full symmetric eigendecomposition, descending order.
EigenDecomposition full_eigen(const Matrix& a);

/// Top-k eigenpairs by algebraic value. Matches the top-k of the full
/// decomposition to 1e-8; falls back to a full solve when the iterative
/// path does not converge.
EigenDecomposition partial_eigen(const BlockSymMatrix& a, Index k,
                                 const Matrix* warm_basis = nullptr);

/// Nearest (Frobenius) PSD matrix: eigendecompose, clip negative eigenvalues,
/// reconstruct. With rank_hint and options this follows the partial /
/// truncation heuristics used by the solvers.
BlockSymMatrix project_psd(const BlockSymMatrix& a,
                           std::optional<Index> rank_hint = std::nullopt,
                           const PsdProjectOptions& opts = {},
                           PsdProjectionInfo* info = nullptr);

/// Singular value soft-thresholding: sigma_i <- max(sigma_i - mu, 0).
Matrix svt(const Matrix& m, double mu);

/// Numerical rank: eigenvalues above rel_tol * lambda_max (lambda_max > 0).
long numerical_rank(const Vector& eigenvalues, double rel_tol = 1e-8);

}  // namespace maxnorm

#endif  // MAXNORM_MATRIX_CORE_HPP_
