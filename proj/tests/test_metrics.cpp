#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "maxnorm/metrics.hpp"
#include "testsupport.hpp"

using namespace maxnorm;
using maxnorm::testing::random_matrix;

TEST_CASE("relative error basics") {
  Rng rng(61);
  Matrix m0 = random_matrix(rng, 4, 5);
  CHECK(relative_error(m0, m0) == 0.0);
  CHECK(relative_error(2.0 * m0, m0) == doctest::Approx(1.0));
  CHECK(relative_error(Matrix::Zero(4, 5), m0) == doctest::Approx(1.0));
}

TEST_CASE("relative error reports |c - 1| for scaled estimates") {
  Rng rng(62);
  Matrix m0 = random_matrix(rng, 3, 3);
  for (double c : {0.25, 0.5, 1.5, -2.0}) {
    CHECK(std::abs(relative_error(c * m0, m0) - std::abs(c - 1.0)) <= 1e-12);
  }
}

TEST_CASE("relative error rejects bad inputs") {
  CHECK_THROWS_AS(relative_error(Matrix::Zero(2, 2), Matrix::Zero(2, 3)), ArgumentError);
  CHECK_THROWS_AS(relative_error(Matrix::Zero(2, 2), Matrix::Zero(2, 2)), ArgumentError);
}

TEST_CASE("nmae basics") {
  Matrix m_hat(2, 2);
  m_hat << 1, 2, 3, 4;
  ObservationSet test(2, 2);
  test.add(0, 0, 1.0);
  test.add(1, 1, 4.0);
  CHECK(nmae(m_hat, test, 1.0, 5.0) == 0.0);

  ObservationSet off(2, 2);
  off.add(0, 0, 1.0 + 4.0);  // off by exactly the range
  off.add(1, 1, 4.0 - 4.0);
  CHECK(nmae(m_hat, off, 1.0, 5.0) == doctest::Approx(1.0));
}

TEST_CASE("nmae matches the worked two-entry example") {
  // Errors 2 and 4 over range [-10, 10]: (2 + 4) / (2 * 20) = 0.15.
  Matrix m_hat = Matrix::Zero(1, 2);
  ObservationSet test(1, 2);
  test.add(0, 0, 2.0);
  test.add(0, 1, -4.0);
  CHECK(nmae(m_hat, test, -10.0, 10.0) == doctest::Approx(0.15));
}

TEST_CASE("nmae is invariant under simultaneous affine re-ranging") {
  Rng rng(63);
  Matrix m_hat = random_matrix(rng, 3, 3);
  ObservationSet test(3, 3);
  test.add(0, 1, 0.4);
  test.add(2, 2, -0.8);
  test.add(1, 0, 0.1);
  const double base = nmae(m_hat, test, -1.0, 1.0);

  const double a = 2.5, b = 3.0;
  Matrix m_hat2 = a * m_hat + b * Matrix::Ones(3, 3);
  ObservationSet test2(3, 3);
  for (const auto& e : test.entries) test2.add(e.row, e.col, a * e.value + b);
  CHECK(nmae(m_hat2, test2, a * -1.0 + b, a * 1.0 + b) == doctest::Approx(base));
}

TEST_CASE("nmae rejects degenerate inputs") {
  Matrix m = Matrix::Zero(2, 2);
  CHECK_THROWS_AS(nmae(m, ObservationSet(2, 2), 0.0, 1.0), ArgumentError);
  ObservationSet t(2, 2);
  t.add(0, 0, 0.5);
  CHECK_THROWS_AS(nmae(m, t, 1.0, 1.0), ArgumentError);
}

TEST_CASE("nmae_with_count reproduces the literal denominator variant") {
  Matrix m_hat = Matrix::Zero(1, 2);
  ObservationSet test(1, 2);
  test.add(0, 0, 2.0);
  test.add(0, 1, -4.0);
  CHECK(nmae_with_count(m_hat, test, -10.0, 10.0, 4) == doctest::Approx(6.0 / (4.0 * 20.0)));
}

TEST_CASE("single-cell sweep emits exactly one row plus one mean") {
  SweepOptions opts;
  SweepTable t = rate_sweep(SchemeKind::Uniform, 16, 2, {0.6}, 0.0, {Method::Nuclear}, 1, 5, opts);
  CHECK(t.rows.size() == 1);
  CHECK(t.means.size() == 1);
  CHECK(t.rows[0].method == "nuclear");
  CHECK(t.means[0].mean_re == doctest::Approx(t.rows[0].re));
}

TEST_CASE("sweep means are arithmetic averages of the per-run errors") {
  SweepTable t =
      rate_sweep(SchemeKind::Uniform, 16, 2, {0.5, 0.7}, 0.0, {Method::Nuclear}, 3, 11, {});
  REQUIRE(t.rows.size() == 6);
  REQUIRE(t.means.size() == 2);
  for (const auto& mean : t.means) {
    double acc = 0.0;
    int n = 0;
    for (const auto& row : t.rows)
      if (row.sr == mean.sr) {
        acc += row.re;
        ++n;
      }
    REQUIRE(n == 3);
    CHECK(std::abs(mean.mean_re - acc / 3.0) <= 1e-15);
  }
}

TEST_CASE("sweep tables are deterministic given the seed") {
  SweepTable a =
      rate_sweep(SchemeKind::Scheme2, 20, 2, {0.5}, 0.01, {Method::Nuclear}, 2, 21, {});
  SweepTable b =
      rate_sweep(SchemeKind::Scheme2, 20, 2, {0.5}, 0.01, {Method::Nuclear}, 2, 21, {});
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].re == b.rows[i].re);
    CHECK(a.rows[i].seed == b.rows[i].seed);
  }
}

TEST_CASE("sweep validates its grid") {
  CHECK_THROWS_AS(rate_sweep(SchemeKind::Uniform, 10, 2, {1.5}, 0.0, {Method::Nuclear}, 1, 1, {}),
                  ArgumentError);
  CHECK_THROWS_AS(rate_sweep(SchemeKind::Uniform, 10, 2, {0.5}, 0.0, {Method::Nuclear}, 0, 1, {}),
                  ArgumentError);
}

TEST_CASE("csv output carries every run column and the aggregate rows") {
  SweepTable t = rate_sweep(SchemeKind::Uniform, 16, 2, {0.6}, 0.0, {Method::Nuclear}, 2, 5, {});
  const std::string csv = result_rows_csv(t.rows, t.means);
  CHECK(csv.find("method,scheme,dt,r,sr,sigma,seed,re,nmae,iters,seconds,converged") == 0);
  CHECK(csv.find("nuclear,1,16,2,0.6,0,5,") != std::string::npos);
  CHECK(csv.find(",mean,") != std::string::npos);
}

TEST_CASE("method names round-trip") {
  for (Method m : {Method::Nuclear, Method::Max, Method::Hybrid, Method::Constrained})
    CHECK(method_from_name(method_name(m)) == m);
  CHECK_THROWS_AS(method_from_name("ridge"), ArgumentError);
}
