#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "maxnorm/admm.hpp"
#include "maxnorm/experiment.hpp"
#include "maxnorm/oracles.hpp"
#include "maxnorm/prox.hpp"
#include "maxnorm/sampling.hpp"

namespace {

using namespace maxnorm;

struct CommonFlags {
  std::string preset;
  double lambda = -1.0;
  double mu = -1.0;
  double alpha = -1.0;
  double cap_r = -1.0;
  double eta_tol = -1.0;
  long max_iters = -1;
  int truncation = -1;
  double time_limit = -1.0;
  int reps = 5;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonFlags* f) {
  cmd->add_option("--preset", f->preset, "named tuning preset")->envname("MAXNORM_MC_PRESET");
  cmd->add_option("--lambda", f->lambda, "explicit max-norm weight");
  cmd->add_option("--mu", f->mu, "explicit nuclear/trace weight");
  cmd->add_option("--alpha", f->alpha, "explicit elementwise bound");
  cmd->add_option("--R", f->cap_r, "explicit max-norm cap (constrained mode)");
  cmd->add_option("--eta-tol", f->eta_tol, "ADMM stopping tolerance");
  cmd->add_option("--max-iters", f->max_iters, "iteration cap");
  cmd->add_option("--truncation", f->truncation, "eigenvalue truncation heuristic (0/1)");
  cmd->add_option("--time-limit", f->time_limit, "per-run wall-clock budget in seconds");
  cmd->add_option("--reps", f->reps, "repetitions per setting")->envname("MAXNORM_MC_REPS");
  cmd->add_option("--seed", f->seed, "base seed; rep k uses seed + k")
      ->envname("MAXNORM_MC_SEED");
  cmd->add_option("--out", f->out, "CSV output path (stdout when omitted)")
      ->envname("MAXNORM_MC_OUT");
  cmd->add_option("--threads", f->threads, "worker threads for repetitions")
      ->envname("MAXNORM_MC_THREADS");
}

ParamOverrides to_overrides(const CommonFlags& f) {
  ParamOverrides o;
  if (f.lambda >= 0.0) o.lambda = f.lambda;
  if (f.mu >= 0.0) o.mu = f.mu;
  if (f.alpha > 0.0) o.alpha = f.alpha;
  if (f.cap_r > 0.0) o.R = f.cap_r;
  if (f.eta_tol > 0.0) o.eta_tol = f.eta_tol;
  if (f.max_iters > 0) o.max_iters = f.max_iters;
  if (f.truncation >= 0) o.truncation = (f.truncation != 0);
  if (f.time_limit > 0.0) o.time_limit = f.time_limit;
  return o;
}

std::vector<Method> parse_methods(const std::string& csv) {
  std::vector<Method> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t pos = csv.find(',', start);
    const std::string name =
        csv.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    if (!name.empty()) out.push_back(method_from_name(name));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (out.empty()) throw ArgumentError("no methods given");
  return out;
}

bool report_check(const char* name, bool ok) {
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
  return ok;
}

int run_oracle_check() {
  bool all = true;
  Rng rng(20240601);

  {
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i) {
      const Index d = 1 + static_cast<Index>(rng.below(32));
      Vector c(d);
      for (Index k = 0; k < d; ++k) c(k) = rng.normal();
      const double beta = std::abs(rng.normal()) * 2.0;
      Vector z = linf_prox(c, beta);
      ok = ((z + oracles::proj_l1_ball(c, beta) - c).cwiseAbs().maxCoeff() <= 1e-10);
    }
    all &= report_check("linf prox Moreau identity (200 random instances)", ok);
  }
  {
    bool ok = true;
    for (int i = 0; i < 100 && ok; ++i) {
      const Index d = 1 + static_cast<Index>(rng.below(8));
      Vector c(d);
      for (Index k = 0; k < d; ++k) c(k) = rng.normal();
      const double beta = std::abs(rng.normal());
      Vector z = linf_prox(c, beta);
      const double f = beta * z.cwiseAbs().maxCoeff() + 0.5 * (c - z).squaredNorm();
      ok = (f - oracles::linf_prox_search_objective(c, beta) <= 1e-8);
    }
    all &= report_check("linf prox optimality vs ternary search (100 instances)", ok);
  }
  {
    bool ok = true;
    for (int inst = 0; inst < 3 && ok; ++inst) {
      ObservationSet obs(3, 3);
      for (int t = 0; t < 6; ++t)
        obs.add(static_cast<Index>(rng.below(3)), static_cast<Index>(rng.below(3)), rng.normal());
      AggregatedObservations agg = AggregatedObservations::from(obs);
      SolverConfig cfg;
      cfg.lambda = 0.1;
      cfg.mu = 0.01;
      cfg.alpha = 2.0;
      cfg.eta_tol = 1e-7;
      cfg.max_iters = 50000;
      cfg.truncation = false;
      SolveOutput ours = solve_penalized(obs, cfg);
      auto oracle = oracles::sdp_oracle_penalized(agg, 0.1, 0.01, 2.0, 150000);
      const double f = oracles::sdp_objective_penalized(ours.z_final, agg, 0.1, 0.01);
      ok = ours.report.converged &&
           std::abs(f - oracle.objective) / std::max(1.0, std::abs(oracle.objective)) <= 1e-4;
    }
    all &= report_check("tiny SDP equivalence, penalized (3 instances)", ok);
  }
  {
    bool ok = true;
    for (int inst = 0; inst < 2 && ok; ++inst) {
      ObservationSet obs(3, 3);
      for (int t = 0; t < 6; ++t)
        obs.add(static_cast<Index>(rng.below(3)), static_cast<Index>(rng.below(3)), rng.normal());
      AggregatedObservations agg = AggregatedObservations::from(obs);
      SolverConfig cfg;
      cfg.R = 1.5;
      cfg.mu = 0.01;
      cfg.alpha = 2.0;
      cfg.eta_tol = 1e-7;
      cfg.max_iters = 50000;
      cfg.truncation = false;
      SolveOutput ours = solve_constrained(obs, cfg);
      auto oracle = oracles::sdp_oracle_constrained(agg, 0.01, 1.5, 2.0, 150000);
      const double f = oracles::sdp_objective_constrained(ours.z_final, agg, 0.01);
      ok = ours.report.converged &&
           std::abs(f - oracle.objective) / std::max(1.0, std::abs(oracle.objective)) <= 1e-4;
    }
    all &= report_check("tiny SDP equivalence, constrained (2 instances)", ok);
  }
  std::printf("%s\n", all ? "oracle-check: all suites passed" : "oracle-check: FAILURES");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"max-norm + nuclear-norm matrix completion experiments"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file supplying any flag");

  auto* sim = app.add_subcommand("simulate", "run simulated completion instances");
  CommonFlags sim_flags;
  std::string sim_method = "hybrid";
  int sim_scheme = 1;
  long sim_dt = 500;
  long sim_r = 5;
  double sim_sr = 0.15;
  double sim_sigma = 0.0;
  sim->add_option("--method", sim_method, "nuclear | max | hybrid | constrained")->required();
  sim->add_option("--scheme", sim_scheme, "sampling scheme 1 | 2 | 3")->required();
  sim->add_option("--dt", sim_dt, "matrix dimension")->required();
  sim->add_option("--r", sim_r, "ground-truth rank")->required();
  sim->add_option("--sr", sim_sr, "sampling ratio")->required();
  sim->add_option("--sigma", sim_sigma, "noise level");
  add_common(sim, &sim_flags);

  auto* real = app.add_subcommand("real", "run on a ratings dataset");
  CommonFlags real_flags;
  std::string real_method = "hybrid";
  std::string real_dataset = "movielens";
  std::string real_path;
  long real_nu = 0;
  int real_scheme = 2;
  double real_sr = 0.15;
  real->add_option("--method", real_method, "nuclear | max | hybrid | constrained")->required();
  real->add_option("--dataset", real_dataset, "movielens | jester")->required();
  real->add_option("--path", real_path, "ratings file")->required();
  real->add_option("--n-u", real_nu, "user subsample size (0 = all)");
  real->add_option("--scheme", real_scheme, "candidate sampling scheme");
  real->add_option("--sr", real_sr, "input sampling ratio");
  add_common(real, &real_flags);

  auto* sweep = app.add_subcommand("sweep", "sampling-ratio sweep");
  CommonFlags sweep_flags;
  std::string sweep_methods = "nuclear,hybrid";
  int sweep_scheme = 1;
  long sweep_dt = 500;
  long sweep_r = 5;
  double sweep_sigma = 0.0;
  std::vector<double> sweep_grid;
  sweep->add_option("--methods", sweep_methods, "comma-separated method list")->required();
  sweep->add_option("--scheme", sweep_scheme, "sampling scheme 1 | 2 | 3")->required();
  sweep->add_option("--dt", sweep_dt, "matrix dimension")->required();
  sweep->add_option("--r", sweep_r, "ground-truth rank")->required();
  sweep->add_option("--sr-grid", sweep_grid, "sampling ratios")->required()->delimiter(',');
  sweep->add_option("--sigma", sweep_sigma, "noise level");
  add_common(sweep, &sweep_flags);

  auto* oracle = app.add_subcommand("oracle-check", "run the independent solver oracles");

  CLI11_PARSE(app, argc, argv);

  try {
    if (oracle->parsed()) return run_oracle_check();

    ExperimentSpec spec;
    if (sim->parsed()) {
      spec.mode = "simulate";
      spec.methods = {method_from_name(sim_method)};
      spec.scheme = scheme_from_label(sim_scheme);
      spec.dt = sim_dt;
      spec.r = sim_r;
      spec.sr = sim_sr;
      spec.sigma = sim_sigma;
      spec.preset = sim_flags.preset;
      spec.overrides = to_overrides(sim_flags);
      spec.reps = sim_flags.reps;
      spec.seed = sim_flags.seed;
      spec.out_path = sim_flags.out;
      spec.threads = sim_flags.threads;
    } else if (real->parsed()) {
      spec.mode = "real";
      spec.methods = {method_from_name(real_method)};
      spec.scheme = scheme_from_label(real_scheme);
      spec.dataset = real_dataset;
      spec.dataset_path = real_path;
      spec.n_u = real_nu;
      spec.sr = real_sr;
      spec.preset = real_flags.preset;
      spec.overrides = to_overrides(real_flags);
      spec.reps = real_flags.reps;
      spec.seed = real_flags.seed;
      spec.out_path = real_flags.out;
      spec.threads = real_flags.threads;
    } else if (sweep->parsed()) {
      spec.mode = "sweep";
      spec.methods = parse_methods(sweep_methods);
      spec.scheme = scheme_from_label(sweep_scheme);
      spec.dt = sweep_dt;
      spec.r = sweep_r;
      spec.sr_grid = sweep_grid;
      spec.sigma = sweep_sigma;
      spec.preset = sweep_flags.preset;
      spec.overrides = to_overrides(sweep_flags);
      spec.reps = sweep_flags.reps;
      spec.seed = sweep_flags.seed;
      spec.out_path = sweep_flags.out;
      spec.threads = sweep_flags.threads;
    }
    return run_experiment(spec);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
}
