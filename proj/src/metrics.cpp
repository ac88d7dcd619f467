#include "maxnorm/metrics.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "maxnorm/admm.hpp"
#include "maxnorm/apg.hpp"
#include "maxnorm/experiment.hpp"
#include "maxnorm/parallel.hpp"
#include "maxnorm/presets.hpp"

namespace maxnorm {

std::string method_name(Method m) {
  switch (m) {
    case Method::Nuclear: return "nuclear";
    case Method::Max: return "max";
    case Method::Hybrid: return "hybrid";
    case Method::Constrained: return "constrained";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  if (name == "nuclear") return Method::Nuclear;
  if (name == "max") return Method::Max;
  if (name == "hybrid") return Method::Hybrid;
  if (name == "constrained") return Method::Constrained;
  throw ArgumentError("unknown method: " + name);
}

double relative_error(const Matrix& m_hat, const Matrix& m0) {
  if (m_hat.rows() != m0.rows() || m_hat.cols() != m0.cols())
    throw ArgumentError("relative_error: shape mismatch");
  const double denom = m0.norm();
  if (denom <= 0.0) throw ArgumentError("relative_error: zero reference matrix");
  return (m_hat - m0).norm() / denom;
}

double nmae(const Matrix& m_hat, const ObservationSet& test_entries, double r_min, double r_max) {
  return nmae_with_count(m_hat, test_entries, r_min, r_max, test_entries.size());
}

double nmae_with_count(const Matrix& m_hat, const ObservationSet& test_entries, double r_min,
                       double r_max, std::size_t denominator_count) {
  if (test_entries.empty()) throw ArgumentError("nmae: empty test set");
  if (r_max <= r_min) throw ArgumentError("nmae: r_max must exceed r_min");
  if (denominator_count == 0) throw ArgumentError("nmae: zero denominator count");
  double abs_err = 0.0;
  for (const auto& e : test_entries.entries) {
    if (e.row >= m_hat.rows() || e.col >= m_hat.cols())
      throw ArgumentError("nmae: test entry out of range");
    abs_err += std::abs(m_hat(e.row, e.col) - e.value);
  }
  return abs_err / (static_cast<double>(denominator_count) * (r_max - r_min));
}

SweepTable rate_sweep(SchemeKind kind, Index dt, Index r, const std::vector<double>& sr_grid,
                      double sigma, const std::vector<Method>& methods, int reps,
                      std::uint64_t seed0, const SweepOptions& opts) {
  if (reps < 1) throw ArgumentError("rate_sweep: reps must be >= 1");
  for (double sr : sr_grid)
    if (sr <= 0.0 || sr > 1.0) throw ArgumentError("rate_sweep: sr outside (0, 1]");

  const TuningPreset preset =
      opts.preset.empty() ? auto_preset(kind, sigma) : preset_by_name(opts.preset);

  struct Task {
    Method method;
    double sr;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (Method m : methods)
    for (double sr : sr_grid)
      for (int rep = 0; rep < reps; ++rep)
        tasks.push_back({m, sr, seed0 + static_cast<std::uint64_t>(rep)});

  std::vector<ResultRow> rows(tasks.size());
  parallel_for(tasks.size(), opts.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    SimulatedRun run = run_simulated_instance(t.method, kind, dt, r, t.sr, sigma, t.seed, preset);
    rows[i] = run.row;
  });

  SweepTable table;
  table.rows = std::move(rows);
  table.means = aggregate_rows(table.rows);
  return table;
}

std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows) {
  std::vector<AggregateRow> means;
  auto find = [&means](const ResultRow& row) -> AggregateRow& {
    for (auto& m : means)
      if (m.method == row.method && m.sr == row.sr) return m;
    AggregateRow agg;
    agg.method = row.method;
    agg.scheme = row.scheme;
    agg.dt = row.dt;
    agg.r = row.r;
    agg.sr = row.sr;
    agg.sigma = row.sigma;
    means.push_back(agg);
    return means.back();
  };
  for (const auto& row : rows) {
    AggregateRow& agg = find(row);
    ++agg.reps;
    agg.mean_iters += row.iters;
    agg.mean_seconds += row.seconds;
    if (row.converged) ++agg.converged_count;
    if (row.re >= 0.0) agg.mean_re = (agg.mean_re < 0.0) ? row.re : agg.mean_re + row.re;
    if (row.nmae >= 0.0)
      agg.mean_nmae = (agg.mean_nmae < 0.0) ? row.nmae : agg.mean_nmae + row.nmae;
  }
  for (auto& agg : means) {
    // Means divide by the full repetition count so flagged runs still show.
    const double n = std::max(1, agg.reps);
    if (agg.mean_re >= 0.0) agg.mean_re /= n;
    if (agg.mean_nmae >= 0.0) agg.mean_nmae /= n;
    agg.mean_iters /= n;
    agg.mean_seconds /= n;
  }
  return means;
}

namespace {

void append_value(std::ostringstream& ss, double v) {
  if (v < 0.0)
    ss << "NA";
  else
    ss << v;
}

}  // namespace

std::string result_rows_csv(const std::vector<ResultRow>& rows,
                            const std::vector<AggregateRow>& means) {
  std::ostringstream ss;
  ss.precision(12);
  ss << "method,scheme,dt,r,sr,sigma,seed,re,nmae,iters,seconds,converged\n";
  for (const auto& r : rows) {
    ss << r.method << ',' << r.scheme << ',' << r.dt << ',' << r.r << ',' << r.sr << ','
       << r.sigma << ',' << r.seed << ',';
    append_value(ss, r.re);
    ss << ',';
    append_value(ss, r.nmae);
    ss << ',' << r.iters << ',' << r.seconds << ',' << (r.converged ? 1 : 0) << '\n';
  }
  for (const auto& m : means) {
    ss << m.method << ',' << m.scheme << ',' << m.dt << ',' << m.r << ',' << m.sr << ','
       << m.sigma << ",mean,";
    append_value(ss, m.mean_re);
    ss << ',';
    append_value(ss, m.mean_nmae);
    ss << ',' << m.mean_iters << ',' << m.mean_seconds << ',' << m.converged_count << '/'
       << m.reps << '\n';
  }
  return ss.str();
}

}  // namespace maxnorm
