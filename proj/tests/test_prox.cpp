#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "maxnorm/oracles.hpp"
#include "maxnorm/prox.hpp"
#include "testsupport.hpp"

using namespace maxnorm;
using maxnorm::testing::random_block_sym;
using maxnorm::testing::random_observations;
using maxnorm::testing::random_vector;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

double linf_objective(const Vector& z, const Vector& c, double beta) {
  return beta * z.cwiseAbs().maxCoeff() + 0.5 * (c - z).squaredNorm();
}

}  // namespace

TEST_CASE("linf_prox with zero penalty returns the input") {
  Rng rng(31);
  Vector c = random_vector(rng, 9);
  CHECK((linf_prox(c, 0.0) - c).norm() == 0.0);
}

TEST_CASE("linf_prox matches the hand-worked two-entry case") {
  CHECK((linf_prox(vec2(3, 1), 1.0) - vec2(2, 1)).norm() < 1e-12);
}

TEST_CASE("linf_prox collapses to zero when beta dominates the l1 norm") {
  Vector c(3);
  c << 1, 1, 1;
  CHECK(linf_prox(c, 3.0).norm() == 0.0);
}

TEST_CASE("linf_prox handles mixed signs by symmetry") {
  CHECK((linf_prox(vec2(-3, 1), 1.0) - vec2(-2, 1)).norm() < 1e-12);
}

TEST_CASE("linf_prox rejects negative beta") {
  CHECK_THROWS_AS(linf_prox(Vector::Zero(2), -0.1), ArgumentError);
}

TEST_CASE("linf_prox satisfies the Moreau identity against the l1-ball oracle") {
  Rng rng(32);
  for (int i = 0; i < 300; ++i) {
    const Index d = 1 + static_cast<Index>(rng.below(32));
    Vector c = random_vector(rng, d);
    const double beta = std::abs(rng.normal()) * 2.0;
    Vector z = linf_prox(c, beta);
    Vector p = oracles::proj_l1_ball(c, beta);
    CHECK((z + p - c).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("linf_prox is optimal against the ternary-search oracle") {
  Rng rng(33);
  for (int i = 0; i < 200; ++i) {
    const Index d = 1 + static_cast<Index>(rng.below(8));
    Vector c = random_vector(rng, d);
    const double beta = std::abs(rng.normal());
    Vector z = linf_prox(c, beta);
    const double gap = linf_objective(z, c, beta) - oracles::linf_prox_search_objective(c, beta);
    CHECK(gap <= 1e-8);
  }
}

TEST_CASE("linf_prox never grows the sup norm and fixes beta = 0") {
  Rng rng(34);
  for (int i = 0; i < 100; ++i) {
    Vector c = random_vector(rng, 6);
    const double beta = std::abs(rng.normal());
    CHECK(linf_prox(c, beta).cwiseAbs().maxCoeff() <= c.cwiseAbs().maxCoeff() + 1e-12);
  }
}

TEST_CASE("z_update_penalized solves the scalar example") {
  // min 0.5 (z - 2)^2 + 0.5 z^2 has minimizer 1, inside [-1, 1].
  ObservationSet obs(1, 1);
  obs.add(0, 0, 2.0);
  BlockSymMatrix c(1, 1);
  BlockSymMatrix z = z_update_penalized(c, AggregatedObservations::from(obs), 0.0, 1.0, 1.0);
  CHECK(z.z12_entry(0, 0) == doctest::Approx(1.0));
  CHECK(z.raw()(0, 0) == 0.0);
  CHECK(z.raw()(1, 1) == 0.0);
}

TEST_CASE("z_update_penalized keeps interior unobserved entries") {
  ObservationSet obs(1, 1);  // empty
  BlockSymMatrix c(1, 1);
  c.set_z12_entry(0, 0, 0.5);
  BlockSymMatrix z = z_update_penalized(c, AggregatedObservations::from(obs), 0.0, 1.0, 1.0);
  CHECK(z.z12_entry(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("z_update_penalized applies the diagonal prox") {
  ObservationSet obs(1, 1);
  BlockSymMatrix c(1, 1);
  Vector diag(2);
  diag << 3, 1;
  c.set_diagonal(diag);
  BlockSymMatrix z = z_update_penalized(c, AggregatedObservations::from(obs), 1.0, 1.0, 1.0);
  CHECK(z.raw()(0, 0) == doctest::Approx(2.0));
  CHECK(z.raw()(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("z_update_penalized output is feasible and beats the oracle-checked competitor") {
  Rng rng(35);
  for (int i = 0; i < 40; ++i) {
    BlockSymMatrix c = random_block_sym(rng, 2, 2);
    ObservationSet obs = random_observations(rng, 2, 2, 3);
    AggregatedObservations agg = AggregatedObservations::from(obs);
    const double lambda = std::abs(rng.normal());
    const double alpha = 0.5 + std::abs(rng.normal());
    const double rho = 0.2 + std::abs(rng.normal());

    BlockSymMatrix z = z_update_penalized(c, agg, lambda, alpha, rho);
    CHECK(Matrix(z.z12()).cwiseAbs().maxCoeff() <= alpha + 1e-12);

    const double ours = oracles::zupdate_penalized_objective(z, c, agg, lambda, rho);
    const double reference = oracles::zupdate_penalized_oracle(c, agg, lambda, alpha, rho);
    CHECK(ours <= reference + 1e-6);
  }
}

TEST_CASE("z_update_penalized is separable across observed entries") {
  Rng rng(36);
  BlockSymMatrix c = random_block_sym(rng, 3, 3);
  ObservationSet obs(3, 3);
  obs.add(0, 1, 1.0);
  obs.add(2, 2, -0.5);
  BlockSymMatrix base =
      z_update_penalized(c, AggregatedObservations::from(obs), 0.3, 2.0, 0.7);
  obs.entries[0].value = 1.5;  // perturb one observation
  BlockSymMatrix bumped =
      z_update_penalized(c, AggregatedObservations::from(obs), 0.3, 2.0, 0.7);
  Matrix diff = (bumped.raw() - base.raw()).cwiseAbs();
  CHECK(diff(0, 3 + 1) > 0.0);
  diff(0, 3 + 1) = 0.0;
  diff(3 + 1, 0) = 0.0;
  CHECK(diff.maxCoeff() == 0.0);
}

TEST_CASE("z_update_penalized validates indices") {
  BlockSymMatrix c(2, 2);
  ObservationSet obs(3, 3);
  obs.add(2, 2, 1.0);
  CHECK_THROWS_AS(z_update_penalized(c, AggregatedObservations::from(obs), 0.0, 1.0, 1.0),
                  ArgumentError);
}

TEST_CASE("z_update_constrained clamps the blocks") {
  ObservationSet empty(1, 1);
  AggregatedObservations agg = AggregatedObservations::from(empty);
  const double R = 0.8;

  BlockSymMatrix c(1, 1);
  Vector diag(2);
  diag << -0.3, 2.0 * R;
  c.set_diagonal(diag);
  BlockSymMatrix z = z_update_constrained(c, agg, R, 1.0, 1.0);
  CHECK(z.raw()(0, 0) == 0.0);   // lower clamp of the diagonal box
  CHECK(z.raw()(1, 1) == R);     // upper clamp

  BlockSymMatrix c2(2, 1);
  c2.raw()(0, 1) = 2.0 * R;  // off-diagonal entry of Z11
  c2.raw()(1, 0) = 2.0 * R;
  BlockSymMatrix z2 = z_update_constrained(c2, AggregatedObservations::from(ObservationSet(2, 1)),
                                           R, 1.0, 1.0);
  CHECK(z2.raw()(0, 1) == R);
}

TEST_CASE("z_update_constrained observed entry follows the printed formula") {
  ObservationSet obs(1, 1);
  obs.add(0, 0, 1.0);
  AggregatedObservations agg = AggregatedObservations::from(obs);
  BlockSymMatrix c(1, 1);

  BlockSymMatrix as_printed =
      z_update_constrained(c, agg, 1.0, 1.0, 2.0, ConstrainedDenominator::AsPrinted);
  CHECK(as_printed.z12_entry(0, 0) == doctest::Approx(0.5));  // (1 + 0) / 2

  // The exact scalar minimizer of 0.5 (z-1)^2 + (rho/2) z^2 is 1/3; the
  // corrected denominator reproduces it and matches the gradient oracle.
  BlockSymMatrix corrected =
      z_update_constrained(c, agg, 1.0, 1.0, 2.0, ConstrainedDenominator::OnePlusRho);
  CHECK(corrected.z12_entry(0, 0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("z_update_constrained (corrected denominator) matches the gradient oracle") {
  Rng rng(37);
  for (int i = 0; i < 40; ++i) {
    BlockSymMatrix c = random_block_sym(rng, 2, 2);
    ObservationSet obs = random_observations(rng, 2, 2, 3);
    AggregatedObservations agg = AggregatedObservations::from(obs);
    const double R = 0.5 + std::abs(rng.normal());
    const double alpha = 0.5 + std::abs(rng.normal());
    const double rho = 0.2 + std::abs(rng.normal());

    BlockSymMatrix z =
        z_update_constrained(c, agg, R, alpha, rho, ConstrainedDenominator::OnePlusRho);
    const double ours = oracles::zupdate_constrained_objective(z, c, agg, rho);
    const double reference = oracles::zupdate_constrained_oracle(c, agg, R, alpha, rho);
    CHECK(ours <= reference + 1e-6);
  }
}

TEST_CASE("aggregation folds duplicate draws") {
  ObservationSet obs(2, 2);
  obs.add(0, 0, 1.0);
  obs.add(0, 0, 3.0);
  obs.add(1, 1, -1.0);
  AggregatedObservations agg = AggregatedObservations::from(obs);
  CHECK(agg.cells.size() == 2);
  CHECK(agg.max_count == 2.0);
  // Observed update with multiplicity m: (sum + rho C) / (m + rho).
  BlockSymMatrix c(2, 2);
  BlockSymMatrix z = z_update_penalized(c, agg, 0.0, 10.0, 1.0);
  CHECK(z.z12_entry(0, 0) == doctest::Approx(4.0 / 3.0));
}
