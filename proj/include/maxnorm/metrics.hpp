#ifndef MAXNORM_METRICS_HPP_
#define MAXNORM_METRICS_HPP_

#include <string>
#include <vector>

#include "maxnorm/sampling.hpp"
#include "maxnorm/types.hpp"

namespace maxnorm {

enum class Method { Nuclear, Max, Hybrid, Constrained };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

/// RE = ||M_hat - M0||_F / ||M0||_F.
double relative_error(const Matrix& m_hat, const Matrix& m0);

/// Mean absolute error over held-out entries, normalized by the rating
/// range. The denominator counts the test entries.
double nmae(const Matrix& m_hat, const ObservationSet& test_entries, double r_min, double r_max);

/// Literal variant normalizing by a caller-supplied count (e.g. the
/// training-set size) instead of the test count.
double nmae_with_count(const Matrix& m_hat, const ObservationSet& test_entries, double r_min,
                       double r_max, std::size_t denominator_count);

/// One long-format result row of a sweep or experiment.
struct ResultRow {
  std::string method;
  int scheme = 0;  // 1 = uniform, 2/3 = non-uniform, 0 = custom/real
  Index dt = 0;
  Index r = 0;
  double sr = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  double re = -1.0;    // < 0 when not applicable
  double nmae = -1.0;  // < 0 when not applicable
  long iters = 0;
  double seconds = 0.0;
  bool converged = false;
};

/// Mean over the repetitions of one (method, sr) grid point; written as an
/// extra CSV row with seed = "mean".
struct AggregateRow {
  std::string method;
  int scheme = 0;
  Index dt = 0;
  Index r = 0;
  double sr = 0.0;
  double sigma = 0.0;
  double mean_re = -1.0;
  double mean_nmae = -1.0;
  double mean_iters = 0.0;
  double mean_seconds = 0.0;
  int converged_count = 0;
  int reps = 0;
};

/// Groups rows by (method, sr) in first-seen order and averages them.
std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows);

struct SweepTable {
  std::vector<ResultRow> rows;
  std::vector<AggregateRow> means;  // per (method, sr), in grid order
};

struct SweepOptions {
  int threads = 1;
  std::string preset;  // empty = pick from scheme & noise level
};

/// Runs each method on reps simulated instances per sampling-ratio grid
/// point and averages the relative errors. Non-converged runs are kept as
/// flagged rows, never dropped.
SweepTable rate_sweep(SchemeKind kind, Index dt, Index r, const std::vector<double>& sr_grid,
                      double sigma, const std::vector<Method>& methods, int reps,
                      std::uint64_t seed0, const SweepOptions& opts = {});

/// CSV emission (long format, one header line).
std::string result_rows_csv(const std::vector<ResultRow>& rows,
                            const std::vector<AggregateRow>& means);

}  // namespace maxnorm

#endif  // MAXNORM_METRICS_HPP_
