#ifndef MAXNORM_TYPES_HPP_
#define MAXNORM_TYPES_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "maxnorm/errors.hpp"

namespace maxnorm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// One observed entry of the target matrix: (row, col, value), 0-based.
struct Observation {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

/// The (Omega, Y) pair: a list of sampled entries plus the matrix shape.
/// Duplicate (row, col) pairs are allowed (sampling with replacement).
struct ObservationSet {
  Index d1 = 0;
  Index d2 = 0;
  std::vector<Observation> entries;

  ObservationSet() = default;
  ObservationSet(Index rows, Index cols) : d1(rows), d2(cols) {}

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }

  void add(Index row, Index col, double value) {
    if (row < 0 || row >= d1 || col < 0 || col >= d2)
      throw ArgumentError("observation index out of range");
    entries.push_back({row, col, value});
  }

  /// Frobenius norm of the observed values, ||Y_Omega||_F.
  double values_norm() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.value * e.value;
    return std::sqrt(s);
  }

  double max_abs_value() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, std::abs(e.value));
    return m;
  }

  /// Dense d1 x d2 matrix with observed values filled in and zeros elsewhere.
  /// Duplicates keep the last written value.
  Matrix zero_filled() const {
    Matrix m = Matrix::Zero(d1, d2);
    for (const auto& e : entries) m(e.row, e.col) = e.value;
    return m;
  }
};

/// Duplicate-aggregated view of an ObservationSet: per unique index pair,
/// the multiplicity and the value sum. The solvers consume this form so
/// that with-replacement draws are handled exactly.
struct AggregatedObservations {
  Index d1 = 0;
  Index d2 = 0;
  struct Cell {
    Index row;
    Index col;
    double sum;     // sum of observed values at this cell
    double sumsq;   // sum of squared observed values
    double count;   // multiplicity
  };
  std::vector<Cell> cells;
  double max_count = 0.0;

  static AggregatedObservations from(const ObservationSet& obs);
};

/// Everything a single solver run reports back.
struct RecoveryReport {
  std::string method;
  double re = -1.0;            // relative Frobenius error (when ground truth known)
  double nmae = -1.0;          // held-out NMAE (real-data runs); < 0 when absent
  long iterations = 0;
  double wall_time = 0.0;      // seconds
  bool converged = false;
  double final_eta = -1.0;     // last stopping residual (ADMM solvers)
  double objective = 0.0;      // final objective value
  long rank_estimate = -1;     // numerical rank of the final PSD iterate
  double max_dual_identity_gap = 0.0;
  std::vector<double> primal_residuals;
  std::vector<double> dual_residuals;
  std::vector<double> eta_trace;
  std::uint64_t seed = 0;
  std::string config_summary;  // key=value snapshot for the run manifest
};

}  // namespace maxnorm

#endif  // MAXNORM_TYPES_HPP_
