#include "fixtures.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

#include "maxnorm/io.hpp"
#include "maxnorm/sampling.hpp"

namespace maxnorm::testing {

namespace {

Matrix factor(Rng& rng, Index n, Index r) {
  Matrix f(n, r);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < r; ++j) f(i, j) = rng.normal();
  return f;
}

}  // namespace

void write_synthetic_movielens(const std::string& path, Index n_users, Index n_items,
                               std::int64_t n_ratings, std::uint64_t seed) {
  const Index rank = 5;
  Rng rng(seed);
  Matrix gu = factor(rng, n_users, rank) / std::sqrt(static_cast<double>(rank));
  Matrix hi = factor(rng, n_items, rank) / std::sqrt(static_cast<double>(rank));

  // Popularity skew akin to a real ratings log: the first tenth of users and
  // items rate / get rated several times more often.
  const Vector p_users = row_profile_for_dim(SchemeKind::Scheme3, n_users);
  const Vector p_items = row_profile_for_dim(SchemeKind::Scheme3, n_items);
  IndexSampler sampler(p_users, p_items);

  std::unordered_set<std::int64_t> seen;
  seen.reserve(static_cast<std::size_t>(n_ratings) * 2);
  std::ostringstream out;
  std::int64_t written = 0;
  while (written < n_ratings) {
    auto [u, i] = sampler.draw(rng);
    const std::int64_t key = static_cast<std::int64_t>(u) * n_items + i;
    if (!seen.insert(key).second) continue;
    const double raw = gu.row(u).dot(hi.row(i)) + 0.25 * rng.normal();
    const double score = 3.0 + 1.6 * raw;
    const long rating = std::lround(std::min(5.0, std::max(1.0, score)));
    out << (u + 1) << '\t' << (i + 1) << '\t' << rating << '\t' << 874965758 + written << '\n';
    ++written;
  }
  write_text_file(path, out.str());
}

void write_synthetic_jester(const std::string& path, Index n_users, std::uint64_t seed) {
  const Index n_jokes = 100;
  const Index rank = 5;
  Rng rng(seed);
  Matrix gu = factor(rng, n_users, rank) / std::sqrt(static_cast<double>(rank));
  Matrix hi = factor(rng, n_jokes, rank) / std::sqrt(static_cast<double>(rank));

  std::ostringstream out;
  for (Index u = 0; u < n_users; ++u) {
    // Users rate between ~40 and ~95 jokes.
    const double density = 0.4 + 0.55 * rng.uniform01();
    std::ostringstream row;
    int count = 0;
    for (Index j = 0; j < n_jokes; ++j) {
      if (rng.uniform01() <= density) {
        double v = 5.5 * gu.row(u).dot(hi.row(j)) + 0.8 * rng.normal();
        v = std::min(10.0, std::max(-10.0, v));
        v = std::round(v * 100.0) / 100.0;
        row << ',' << v;
        ++count;
      } else {
        row << ",99";
      }
    }
    out << count << row.str() << '\n';
  }
  write_text_file(path, out.str());
}

}  // namespace maxnorm::testing
