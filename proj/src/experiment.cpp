#include "maxnorm/experiment.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "maxnorm/admm.hpp"
#include "maxnorm/apg.hpp"
#include "maxnorm/parallel.hpp"

namespace maxnorm {

namespace {

struct SolveDispatch {
  Matrix m_hat;
  RecoveryReport report;
};

SolverConfig base_solver_config(const ParamOverrides& o) {
  SolverConfig cfg;
  if (o.alpha) cfg.alpha = *o.alpha;
  if (o.eta_tol) cfg.eta_tol = *o.eta_tol;
  if (o.max_iters) cfg.max_iters = *o.max_iters;
  if (o.truncation) cfg.truncation = *o.truncation;
  cfg.time_limit = o.time_limit;
  return cfg;
}

SolveDispatch dispatch(Method method, const ObservationSet& obs, const TuningPreset& preset,
                       double alpha, Index rank_hint_for_R, const ParamOverrides& o) {
  const double y_norm = obs.values_norm();
  SolveDispatch out;
  switch (method) {
    case Method::Nuclear: {
      ApgConfig cfg;
      cfg.mu = o.mu ? *o.mu : preset.nuclear_mu_scale * y_norm;
      if (o.max_iters) cfg.max_iters = *o.max_iters;
      cfg.time_limit = o.time_limit;
      ApgOutput r = solve_nuclear(obs, cfg);
      out.m_hat = std::move(r.m_hat);
      out.report = std::move(r.report);
      out.report.method = "nuclear";
      return out;
    }
    case Method::Max: {
      SolverConfig cfg = base_solver_config(o);
      cfg.alpha = o.alpha ? *o.alpha : alpha;
      cfg.lambda = o.lambda ? *o.lambda : preset.max_lambda_scale * y_norm;
      cfg.mu = o.mu ? *o.mu : 0.0;
      SolveOutput r = solve_penalized(obs, cfg);
      out.m_hat = std::move(r.m_hat);
      out.report = std::move(r.report);
      out.report.method = "max";
      return out;
    }
    case Method::Hybrid: {
      SolverConfig cfg = base_solver_config(o);
      cfg.alpha = o.alpha ? *o.alpha : alpha;
      cfg.lambda = o.lambda ? *o.lambda : preset.hybrid_lambda_scale * y_norm;
      cfg.mu = o.mu ? *o.mu : preset.hybrid_mu_over_lambda * (*cfg.lambda);
      SolveOutput r = solve_penalized(obs, cfg);
      out.m_hat = std::move(r.m_hat);
      out.report = std::move(r.report);
      out.report.method = "hybrid";
      return out;
    }
    case Method::Constrained: {
      SolverConfig cfg = base_solver_config(o);
      cfg.alpha = o.alpha ? *o.alpha : alpha;
      const double r_default =
          cfg.alpha * std::sqrt(std::max<Index>(rank_hint_for_R, 1));
      cfg.R = o.R ? *o.R : r_default;
      cfg.mu = o.mu ? *o.mu : 0.0;
      SolveOutput r = solve_constrained(obs, cfg);
      out.m_hat = std::move(r.m_hat);
      out.report = std::move(r.report);
      out.report.method = "constrained";
      return out;
    }
  }
  throw ArgumentError("dispatch: unknown method");
}

}  // namespace

int scheme_label(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Uniform: return 1;
    case SchemeKind::Scheme2: return 2;
    case SchemeKind::Scheme3: return 3;
    case SchemeKind::CustomRowProfile: return 0;
  }
  return 0;
}

SchemeKind scheme_from_label(int label) {
  switch (label) {
    case 1: return SchemeKind::Uniform;
    case 2: return SchemeKind::Scheme2;
    case 3: return SchemeKind::Scheme3;
    default: throw ArgumentError("scheme label must be 1, 2 or 3");
  }
}

SimulatedRun run_simulated_instance(Method method, SchemeKind kind, Index dt, Index r, double sr,
                                    double sigma, std::uint64_t seed, const TuningPreset& preset,
                                    const ParamOverrides& overrides) {
  GroundTruth truth = gen_ground_truth(dt, r, derive_seed(seed, 1));
  SamplingScheme scheme{kind, dt, sr, false, {}};
  ObservationSet obs = draw_observations(truth, scheme, sigma, derive_seed(seed, 2));

  const double alpha = truth.m0.cwiseAbs().maxCoeff();
  SolveDispatch solved = dispatch(method, obs, preset, alpha, r, overrides);

  SimulatedRun out;
  out.row.method = solved.report.method;
  out.row.scheme = scheme_label(kind);
  out.row.dt = dt;
  out.row.r = r;
  out.row.sr = sr;
  out.row.sigma = sigma;
  out.row.seed = seed;
  out.row.re = relative_error(solved.m_hat, truth.m0);
  out.row.iters = solved.report.iterations;
  out.row.seconds = solved.report.wall_time;
  out.row.converged = solved.report.converged;
  solved.report.re = out.row.re;
  solved.report.seed = seed;
  out.m_hat = std::move(solved.m_hat);
  out.report = std::move(solved.report);
  return out;
}

SimulatedRun run_real_instance(Method method, const RatingDataset& ds, Index n_u, SchemeKind kind,
                               double sr, std::uint64_t seed, const TuningPreset& preset,
                               const ParamOverrides& overrides) {
  const Index users = (n_u > 0) ? n_u : ds.n_users;
  RealSplit split = split_real(ds, users, kind, sr, derive_seed(seed, 3));

  const double alpha = std::max(std::abs(ds.r_min), std::abs(ds.r_max));
  SolveDispatch solved = dispatch(method, split.train, preset, alpha, 5, overrides);

  SimulatedRun out;
  out.row.method = solved.report.method;
  out.row.scheme = scheme_label(kind);
  out.row.dt = users;
  out.row.r = 0;
  out.row.sr = sr;
  out.row.sigma = 0.0;
  out.row.seed = seed;
  out.row.nmae = nmae(solved.m_hat, split.test, ds.r_min, ds.r_max);
  out.row.iters = solved.report.iterations;
  out.row.seconds = solved.report.wall_time;
  out.row.converged = solved.report.converged;
  solved.report.nmae = out.row.nmae;
  solved.report.seed = seed;
  out.m_hat = std::move(solved.m_hat);
  out.report = std::move(solved.report);
  return out;
}

void ExperimentSpec::validate() const {
  if (mode != "simulate" && mode != "real" && mode != "sweep")
    throw ArgumentError("mode must be simulate, real or sweep");
  if (methods.empty()) throw ArgumentError("at least one method is required");
  if (reps < 1) throw ArgumentError("reps must be >= 1");
  if (mode == "simulate") {
    if (dt < 2 || r < 1 || r > dt) throw ArgumentError("simulate: bad dt / r");
    if (sr <= 0.0 || sr > 1.0) throw ArgumentError("simulate: sr outside (0, 1]");
  }
  if (mode == "sweep") {
    if (dt < 2 || r < 1 || r > dt) throw ArgumentError("sweep: bad dt / r");
    if (sr_grid.empty()) throw ArgumentError("sweep: empty sr grid");
    for (double s : sr_grid)
      if (s <= 0.0 || s > 1.0) throw ArgumentError("sweep: sr outside (0, 1]");
  }
  if (mode == "real") {
    if (dataset != "movielens" && dataset != "jester")
      throw ArgumentError("real: dataset must be movielens or jester");
    if (dataset_path.empty()) throw ArgumentError("real: dataset path required");
    if (sr <= 0.0 || sr > 1.0) throw ArgumentError("real: sr outside (0, 1]");
  }
}

int run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const TuningPreset preset = spec.preset.empty()
                                  ? (spec.mode == "real" ? preset_by_name("real-data")
                                                         : auto_preset(spec.scheme, spec.sigma))
                                  : preset_by_name(spec.preset);

  std::vector<ResultRow> rows;
  std::size_t failures = 0;

  if (spec.mode == "sweep") {
    SweepOptions opts;
    opts.threads = spec.threads;
    opts.preset = preset.name;
    SweepTable table = rate_sweep(spec.scheme, spec.dt, spec.r, spec.sr_grid, spec.sigma,
                                  spec.methods, spec.reps, spec.seed, opts);
    rows = table.rows;
  } else {
    RatingDataset ds;
    if (spec.mode == "real")
      ds = (spec.dataset == "movielens") ? load_movielens(spec.dataset_path)
                                         : load_jester(spec.dataset_path);

    struct Task {
      Method method;
      std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (Method m : spec.methods)
      for (int rep = 0; rep < spec.reps; ++rep)
        tasks.push_back({m, spec.seed + static_cast<std::uint64_t>(rep)});

    rows.assign(tasks.size(), ResultRow{});
    std::vector<char> ok(tasks.size(), 1);
    parallel_for(tasks.size(), spec.threads, [&](std::size_t i) {
      const Task& t = tasks[i];
      try {
        SimulatedRun run =
            (spec.mode == "simulate")
                ? run_simulated_instance(t.method, spec.scheme, spec.dt, spec.r, spec.sr,
                                         spec.sigma, t.seed, preset, spec.overrides)
                : run_real_instance(t.method, ds, spec.n_u, spec.scheme, spec.sr, t.seed, preset,
                                    spec.overrides);
        rows[i] = run.row;
      } catch (const std::exception& ex) {
        ok[i] = 0;
        ResultRow& row = rows[i];
        row.method = method_name(t.method);
        row.scheme = scheme_label(spec.scheme);
        row.seed = t.seed;
        row.converged = false;
        std::cerr << "run failed (" << method_name(t.method) << ", seed " << t.seed
                  << "): " << ex.what() << '\n';
      }
    });
    for (char c : ok)
      if (!c) ++failures;
  }

  const std::string csv = result_rows_csv(rows, aggregate_rows(rows));
  if (!spec.out_path.empty()) {
    write_text_file(spec.out_path, csv);
    std::vector<std::pair<std::string, std::string>> manifest;
    manifest.emplace_back("tool", "maxnorm-mc 0.1.0");
    manifest.emplace_back("mode", spec.mode);
    {
      std::ostringstream names;
      for (std::size_t i = 0; i < spec.methods.size(); ++i)
        names << (i ? "," : "") << method_name(spec.methods[i]);
      manifest.emplace_back("methods", names.str());
    }
    manifest.emplace_back("scheme", std::to_string(scheme_label(spec.scheme)));
    manifest.emplace_back("dt", std::to_string(spec.dt));
    manifest.emplace_back("r", std::to_string(spec.r));
    manifest.emplace_back("sr", std::to_string(spec.sr));
    manifest.emplace_back("sigma", std::to_string(spec.sigma));
    manifest.emplace_back("reps", std::to_string(spec.reps));
    manifest.emplace_back("seed", std::to_string(spec.seed));
    manifest.emplace_back("preset", preset.name);
    if (!spec.dataset.empty()) manifest.emplace_back("dataset", spec.dataset);
    if (!spec.dataset_path.empty()) manifest.emplace_back("dataset_path", spec.dataset_path);
    if (spec.n_u > 0) manifest.emplace_back("n_u", std::to_string(spec.n_u));
    if (spec.overrides.lambda) manifest.emplace_back("lambda", std::to_string(*spec.overrides.lambda));
    if (spec.overrides.mu) manifest.emplace_back("mu", std::to_string(*spec.overrides.mu));
    if (spec.overrides.alpha) manifest.emplace_back("alpha", std::to_string(*spec.overrides.alpha));
    if (spec.overrides.R) manifest.emplace_back("R", std::to_string(*spec.overrides.R));
    write_manifest(spec.out_path + ".manifest", manifest);
  } else {
    std::cout << csv;
  }

  if (!rows.empty() && failures == rows.size()) return 1;
  return 0;
}

}  // namespace maxnorm
