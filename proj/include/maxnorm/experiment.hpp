#ifndef MAXNORM_EXPERIMENT_HPP_
#define MAXNORM_EXPERIMENT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "maxnorm/io.hpp"
#include "maxnorm/metrics.hpp"
#include "maxnorm/presets.hpp"
#include "maxnorm/types.hpp"

namespace maxnorm {

/// Explicit parameter overrides; anything unset falls back to the preset
/// (scaled by ||Y_Omega||_F) and the solver defaults.
struct ParamOverrides {
  std::optional<double> lambda;
  std::optional<double> mu;
  std::optional<double> alpha;
  std::optional<double> R;
  std::optional<double> eta_tol;
  std::optional<long> max_iters;
  std::optional<bool> truncation;
  std::optional<double> time_limit;  // seconds; unset = none
};

struct SimulatedRun {
  ResultRow row;
  Matrix m_hat;
  RecoveryReport report;
};

int scheme_label(SchemeKind kind);
SchemeKind scheme_from_label(int label);

/// One simulated completion instance end to end: ground truth, sampling,
/// solve, score. Sub-stream seeds are derived from `seed`, so a fixed seed
/// reproduces the run bit for bit.
SimulatedRun run_simulated_instance(Method method, SchemeKind kind, Index dt, Index r, double sr,
                                    double sigma, std::uint64_t seed, const TuningPreset& preset,
                                    const ParamOverrides& overrides = {});

/// One real-data instance: user subsample + scheme split, solve on the
/// train set, NMAE on the held-out ratings.
SimulatedRun run_real_instance(Method method, const RatingDataset& ds, Index n_u, SchemeKind kind,
                               double sr, std::uint64_t seed, const TuningPreset& preset,
                               const ParamOverrides& overrides = {});

/// Full experiment description as assembled by the CLI.
struct ExperimentSpec {
  std::string mode;  // "simulate" | "real" | "sweep"
  std::vector<Method> methods;
  SchemeKind scheme = SchemeKind::Uniform;
  Index dt = 0;
  Index r = 0;
  double sr = 0.0;
  std::vector<double> sr_grid;  // sweep mode
  double sigma = 0.0;
  std::string dataset;       // "movielens" | "jester" (real mode)
  std::string dataset_path;  // real mode
  Index n_u = 0;             // real mode user subsample (0 = all users)
  std::string preset;        // empty = auto
  ParamOverrides overrides;
  int reps = 5;
  std::uint64_t seed = 1;
  std::string out_path;  // CSV destination; empty = stdout only
  int threads = 1;

  void validate() const;
};

/// Executes the spec, writes the CSV and its manifest, and returns the
/// process exit code (0 when at least one run succeeded).
int run_experiment(const ExperimentSpec& spec);

}  // namespace maxnorm

#endif  // MAXNORM_EXPERIMENT_HPP_
