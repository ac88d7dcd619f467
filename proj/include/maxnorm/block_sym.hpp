#ifndef MAXNORM_BLOCK_SYM_HPP_
#define MAXNORM_BLOCK_SYM_HPP_

#include "maxnorm/types.hpp"

namespace maxnorm {

/// Symmetric d x d matrix, d = d1 + d2, with addressable blocks
///
///   [ Z11  Z12 ]      Z11: d1 x d1,  Z12: d1 x d2,  Z22: d2 x d2.
///   [ Z12' Z22 ]
///
/// Writes through the block setters keep the matrix symmetric; arithmetic
/// done on raw() should be followed by symmetrize().
class BlockSymMatrix {
 public:
  BlockSymMatrix() = default;
  BlockSymMatrix(Index d1, Index d2)
      : d1_(d1), d2_(d2), data_(Matrix::Zero(d1 + d2, d1 + d2)) {
    if (d1 < 0 || d2 < 0 || d1 + d2 <= 0) throw ArgumentError("BlockSymMatrix: bad dimensions");
  }

  /// Wraps an existing dense matrix; rejects non-symmetric input.
  static BlockSymMatrix from_data(Index d1, Index d2, Matrix data,
                                  double tol = kSymmetryTol) {
    if (data.rows() != d1 + d2 || data.cols() != d1 + d2)
      throw ArgumentError("BlockSymMatrix: data shape does not match d1+d2");
    BlockSymMatrix m;
    m.d1_ = d1;
    m.d2_ = d2;
    m.data_ = std::move(data);
    if (!m.is_symmetric(tol))
      throw ContractViolation("BlockSymMatrix: input is not symmetric within tolerance");
    m.symmetrize();
    return m;
  }

  Index dim1() const { return d1_; }
  Index dim2() const { return d2_; }
  Index dim() const { return d1_ + d2_; }

  Matrix& raw() { return data_; }
  const Matrix& raw() const { return data_; }

  auto z11() const { return data_.topLeftCorner(d1_, d1_); }
  auto z12() const { return data_.topRightCorner(d1_, d2_); }
  auto z22() const { return data_.bottomRightCorner(d2_, d2_); }

  double z12_entry(Index k, Index l) const { return data_(k, d1_ + l); }

  /// Writes one 12-block entry, mirrored into the transpose block.
  void set_z12_entry(Index k, Index l, double v) {
    data_(k, d1_ + l) = v;
    data_(d1_ + l, k) = v;
  }

  void set_z12(const Eigen::Ref<const Matrix>& m) {
    data_.topRightCorner(d1_, d2_) = m;
    data_.bottomLeftCorner(d2_, d1_) = m.transpose();
  }

  Vector diagonal() const { return data_.diagonal(); }
  void set_diagonal(const Vector& v) { data_.diagonal() = v; }

  void symmetrize() { data_ = 0.5 * (data_ + data_.transpose()).eval(); }

  bool is_symmetric(double rel_tol = kSymmetryTol) const {
    double scale = std::max(1.0, data_.cwiseAbs().maxCoeff());
    return (data_ - data_.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
  }

  static constexpr double kSymmetryTol = 1e-12;

 private:
  Index d1_ = 0;
  Index d2_ = 0;
  Matrix data_;
};

}  // namespace maxnorm

#endif  // MAXNORM_BLOCK_SYM_HPP_
