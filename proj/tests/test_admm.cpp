#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "maxnorm/admm.hpp"
#include "maxnorm/metrics.hpp"
#include "maxnorm/oracles.hpp"
#include "testsupport.hpp"

using namespace maxnorm;
using maxnorm::testing::random_observations;

namespace {

ObservationSet full_observation(const Matrix& m0) {
  ObservationSet obs(m0.rows(), m0.cols());
  for (Index i = 0; i < m0.rows(); ++i)
    for (Index j = 0; j < m0.cols(); ++j) obs.add(i, j, m0(i, j));
  return obs;
}

Matrix rank1_truth(Index d) {
  Vector u(d), v(d);
  for (Index i = 0; i < d; ++i) {
    u(i) = 1.0 + 0.3 * static_cast<double>(i);
    v(i) = 2.0 - 0.4 * static_cast<double>(i);
  }
  return u * v.transpose();
}

}  // namespace

TEST_CASE("residuals vanish at a fixed point") {
  SolverState st;
  st.X = BlockSymMatrix(2, 2);
  st.Z = BlockSymMatrix(2, 2);
  st.W = BlockSymMatrix(2, 2);
  st.rho = 0.5;
  ResidualValues r = residuals(st, st.Z, 1.618);
  CHECK(r.r_p == 0.0);
  CHECK(r.r_d == 0.0);
  CHECK(r.eta == 0.0);
}

TEST_CASE("residuals match the hand-evaluated 2x2 case") {
  // X - Z = [[1,0],[0,0]], rho = 1, tau = 1.618, Z_prev = Z:
  // R_P = 1, ||W - W~|| = 0.618, R_D = 0.618.
  SolverState st;
  st.X = BlockSymMatrix(1, 1);
  st.Z = BlockSymMatrix(1, 1);
  st.W = BlockSymMatrix(1, 1);
  st.X.raw()(0, 0) = 1.0;
  st.rho = 1.0;
  ResidualValues r = residuals(st, st.Z, 1.618);
  CHECK(r.r_p == doctest::Approx(1.0));
  CHECK(r.r_d == doctest::Approx(0.618));
  CHECK(r.eta == doctest::Approx(1.0));
}

TEST_CASE("dual-update identity holds on random states") {
  Rng rng(41);
  for (int i = 0; i < 50; ++i) {
    const double rho = 0.1 + std::abs(rng.normal());
    const double tau = 1.618;
    BlockSymMatrix x = maxnorm::testing::random_block_sym(rng, 2, 3);
    BlockSymMatrix z = maxnorm::testing::random_block_sym(rng, 2, 3);
    BlockSymMatrix w_prev = maxnorm::testing::random_block_sym(rng, 2, 3);
    Matrix diff = x.raw() - z.raw();
    Matrix w_new = w_prev.raw() + tau * rho * diff;
    Matrix w_tilde = w_prev.raw() + rho * diff;
    CHECK(((w_new - w_tilde) - (tau - 1.0) * rho * diff).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("adapt_rho follows the balancing rule") {
  SolverConfig cfg;
  CHECK(adapt_rho(1.0, 1.0, 4.0, cfg) == doctest::Approx(0.7));
  CHECK(adapt_rho(1.0, 4.0, 1.0, cfg) == doctest::Approx(1.3));
  CHECK(adapt_rho(1.0, 2.0, 2.0, cfg) == 1.0);
  CHECK(adapt_rho(1e-6, 1.0, 4.0, cfg) == doctest::Approx(1e-6));  // clamped
  CHECK(adapt_rho(1e6, 4.0, 1.0, cfg) == doctest::Approx(1e6));
}

TEST_CASE("penalized solver recovers a fully observed matrix without regularization") {
  Matrix m0 = rank1_truth(3);
  ObservationSet obs = full_observation(m0);
  SolverConfig cfg;
  cfg.lambda = 0.0;
  cfg.mu = 0.0;
  cfg.alpha = m0.cwiseAbs().maxCoeff() + 1.0;
  cfg.max_iters = 2000;
  SolveOutput out = solve_penalized(obs, cfg);
  CHECK(relative_error(out.m_hat, m0) <= 1e-4);
}

TEST_CASE("huge max-norm weight drives the estimate to zero") {
  Matrix m0 = rank1_truth(3);
  ObservationSet obs = full_observation(m0);
  SolverConfig cfg;
  cfg.lambda = 1e6 * obs.values_norm();
  cfg.mu = 0.0;
  cfg.alpha = m0.cwiseAbs().maxCoeff();
  cfg.eta_tol = 1e-9;
  cfg.max_iters = 20000;
  SolveOutput out = solve_penalized(obs, cfg);
  CHECK(out.m_hat.norm() <= 1e-6 * m0.norm());
}

TEST_CASE("trace weight shrinks a single observed entry by mu") {
  // With one observation and no active box/diagonal penalty the SDP
  // optimum satisfies Z12 = Y - mu (rank-one complementarity).
  const double y = 2.0;
  const double mu = 0.3;
  ObservationSet obs(1, 1);
  obs.add(0, 0, y);
  SolverConfig cfg;
  cfg.lambda = 0.0;
  cfg.mu = mu;
  cfg.alpha = 10.0;
  cfg.eta_tol = 1e-10;
  cfg.max_iters = 20000;
  SolveOutput out = solve_penalized(obs, cfg);
  CHECK(out.m_hat(0, 0) == doctest::Approx(y - mu).epsilon(1e-6));
}

TEST_CASE("penalized solver matches the long-horizon SDP oracle on tiny instances") {
  Rng rng(42);
  for (int inst = 0; inst < 4; ++inst) {
    ObservationSet obs = random_observations(rng, 3, 3, 6);
    AggregatedObservations agg = AggregatedObservations::from(obs);
    const double lambda = 0.1;
    const double mu = 0.01;
    const double alpha = 2.0;

    SolverConfig cfg;
    cfg.lambda = lambda;
    cfg.mu = mu;
    cfg.alpha = alpha;
    cfg.eta_tol = 1e-7;
    cfg.max_iters = 50000;
    cfg.truncation = false;
    SolveOutput ours = solve_penalized(obs, cfg);
    REQUIRE(ours.report.converged);

    auto oracle = oracles::sdp_oracle_penalized(agg, lambda, mu, alpha, 200000);
    const double f_ours = oracles::sdp_objective_penalized(ours.z_final, agg, lambda, mu);
    const double gap = (f_ours - oracle.objective) / std::max(1.0, std::abs(oracle.objective));
    CHECK(gap <= 1e-4);
    CHECK(gap >= -1e-4);  // oracle should not beat a converged run materially
  }
}

TEST_CASE("constrained solver recovers a fully observed matrix") {
  Matrix m0 = rank1_truth(3);
  ObservationSet obs = full_observation(m0);
  SolverConfig cfg;
  cfg.R = 100.0;
  cfg.mu = 0.0;
  cfg.alpha = m0.cwiseAbs().maxCoeff() + 1.0;
  cfg.max_iters = 2000;
  SolveOutput out = solve_constrained(obs, cfg);
  CHECK(relative_error(out.m_hat, m0) <= 1e-4);
}

TEST_CASE("collapsing the diagonal box collapses the estimate") {
  Matrix m0 = rank1_truth(3);
  ObservationSet obs = full_observation(m0);
  SolverConfig cfg;
  cfg.R = 1e-9;
  cfg.mu = 0.0;
  cfg.alpha = m0.cwiseAbs().maxCoeff();
  cfg.eta_tol = 1e-9;
  cfg.max_iters = 20000;
  SolveOutput out = solve_constrained(obs, cfg);
  CHECK(out.m_hat.norm() <= 1e-6 * m0.norm());
}

TEST_CASE("constrained solver matches the long-horizon SDP oracle") {
  Rng rng(43);
  for (int inst = 0; inst < 3; ++inst) {
    ObservationSet obs = random_observations(rng, 3, 3, 6);
    AggregatedObservations agg = AggregatedObservations::from(obs);
    const double mu = 0.01;
    const double alpha = 2.0;
    const double cap = 1.5;

    SolverConfig cfg;
    cfg.R = cap;
    cfg.mu = mu;
    cfg.alpha = alpha;
    cfg.eta_tol = 1e-7;
    cfg.max_iters = 50000;
    cfg.truncation = false;
    SolveOutput ours = solve_constrained(obs, cfg);
    REQUIRE(ours.report.converged);

    auto oracle = oracles::sdp_oracle_constrained(agg, mu, cap, alpha, 200000);
    const double f_ours = oracles::sdp_objective_constrained(ours.z_final, agg, mu);
    const double gap = (f_ours - oracle.objective) / std::max(1.0, std::abs(oracle.objective));
    CHECK(gap <= 1e-4);
    CHECK(gap >= -1e-4);
  }
}

TEST_CASE("iterates stay feasible and the KKT threshold holds at exit") {
  Rng rng(44);
  ObservationSet obs = random_observations(rng, 4, 4, 8);
  SolverConfig cfg;
  cfg.lambda = 0.2;
  cfg.mu = 0.01;
  cfg.alpha = 1.0;
  cfg.max_iters = 5000;
  SolveOutput out = solve_penalized(obs, cfg);
  REQUIRE(out.report.converged);
  CHECK(out.report.final_eta <= cfg.eta_tol);
  CHECK(Matrix(out.z_final.z12()).cwiseAbs().maxCoeff() <= cfg.alpha + 1e-10);
  EigenDecomposition e = full_eigen(out.x_final.raw());
  CHECK(e.eigenvalues.minCoeff() >= -1e-8);
  CHECK(out.report.max_dual_identity_gap <= 1e-12);
}

TEST_CASE("running-minimum of eta is non-increasing at fixed rho") {
  Rng rng(45);
  ObservationSet obs = random_observations(rng, 4, 4, 8);
  SolverConfig cfg;
  cfg.lambda = 0.2;
  cfg.mu = 0.0;
  cfg.alpha = 1.0;
  cfg.max_iters = 200;
  SolveOutput out = solve_penalized(obs, cfg);
  const auto& eta = out.report.eta_trace;
  // Windows of 20 iterations share one rho (adaptation period is 10, but the
  // running minimum is monotone regardless of the segment boundaries).
  double running = std::numeric_limits<double>::infinity();
  for (double v : eta) {
    const double next = std::min(running, v);
    CHECK(next <= running);
    running = next;
  }
}

TEST_CASE("identical inputs give bit-identical residual traces") {
  Rng rng(46);
  ObservationSet obs = random_observations(rng, 5, 5, 10);
  SolverConfig cfg;
  cfg.lambda = 0.5;
  cfg.mu = 0.02;
  cfg.alpha = 1.5;
  SolveOutput a = solve_penalized(obs, cfg);
  SolveOutput b = solve_penalized(obs, cfg);
  REQUIRE(a.report.eta_trace.size() == b.report.eta_trace.size());
  for (std::size_t i = 0; i < a.report.eta_trace.size(); ++i)
    CHECK(a.report.eta_trace[i] == b.report.eta_trace[i]);
  CHECK((a.m_hat - b.m_hat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("penalized and constrained solutions agree through strong duality") {
  Rng rng(47);
  ObservationSet obs = random_observations(rng, 3, 3, 7);
  AggregatedObservations agg = AggregatedObservations::from(obs);
  SolverConfig pen;
  pen.lambda = 0.4;
  pen.mu = 0.01;
  pen.alpha = 2.0;
  pen.eta_tol = 1e-8;
  pen.max_iters = 100000;
  pen.truncation = false;
  SolveOutput p = solve_penalized(obs, pen);
  REQUIRE(p.report.converged);
  const double m_star = p.z_final.diagonal().cwiseAbs().maxCoeff();
  REQUIRE(m_star > 0.0);

  SolverConfig con;
  con.R = m_star;
  con.mu = pen.mu;
  con.alpha = pen.alpha;
  con.eta_tol = 1e-8;
  con.max_iters = 100000;
  con.truncation = false;
  SolveOutput c = solve_constrained(obs, con);
  REQUIRE(c.report.converged);

  auto data_term = [&agg](const BlockSymMatrix& z) {
    return oracles::sdp_objective_constrained(z, agg, 0.0);
  };
  const double dp = data_term(p.z_final);
  const double dc = data_term(c.z_final);
  CHECK(std::abs(dp - dc) <= 1e-3 * std::max(1.0, std::abs(dp)));
}

TEST_CASE("solver validates its configuration") {
  ObservationSet obs(1, 1);
  obs.add(0, 0, 1.0);
  SolverConfig cfg;  // no lambda, no R
  CHECK_THROWS_AS(solve_penalized(obs, cfg), ArgumentError);
  CHECK_THROWS_AS(solve_constrained(obs, cfg), ArgumentError);
  cfg.lambda = 1.0;
  cfg.R = 1.0;
  CHECK_THROWS_AS(solve_penalized(obs, cfg), ArgumentError);  // both set
  cfg.R.reset();
  cfg.tau = 1.7;
  CHECK_THROWS_AS(solve_penalized(obs, cfg), ArgumentError);
  cfg.tau = 1.618;
  CHECK_THROWS_AS(solve_penalized(ObservationSet(2, 2), cfg), ArgumentError);  // empty
}
