#include "maxnorm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace maxnorm {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + stream * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

GroundTruth gen_ground_truth(Index dt, Index r, std::uint64_t seed) {
  if (dt < 1) throw ArgumentError("gen_ground_truth: dt must be positive");
  if (r < 1 || r > dt) throw ArgumentError("gen_ground_truth: rank out of range");
  Rng rng(seed);
  GroundTruth g;
  g.rank = r;
  g.left = Matrix(dt, r);
  g.right = Matrix(dt, r);
  for (Index i = 0; i < dt; ++i)
    for (Index j = 0; j < r; ++j) g.left(i, j) = rng.normal();
  for (Index i = 0; i < dt; ++i)
    for (Index j = 0; j < r; ++j) g.right(i, j) = rng.normal();
  g.m0 = g.left * g.right.transpose();
  return g;
}

Vector row_profile_for_dim(SchemeKind kind, Index dim, const Vector* custom) {
  if (dim < 1) throw ArgumentError("row_profile: dimension must be positive");
  Vector p(dim);
  switch (kind) {
    case SchemeKind::Uniform:
      p.setConstant(1.0 / static_cast<double>(dim));
      return p;
    case SchemeKind::Scheme2:
    case SchemeKind::Scheme3: {
      const double w1 = (kind == SchemeKind::Scheme2) ? 2.0 : 3.0;
      const double w2 = (kind == SchemeKind::Scheme2) ? 4.0 : 9.0;
      const Index b1 = dim / 10;
      const Index b2 = dim / 5;
      double total = 0.0;
      for (Index k = 0; k < dim; ++k) {
        const double w = (k < b1) ? w1 : (k < b2 ? w2 : 1.0);
        p(k) = w;
        total += w;
      }
      p /= total;
      return p;
    }
    case SchemeKind::CustomRowProfile: {
      if (custom == nullptr || custom->size() != dim)
        throw ArgumentError("row_profile: custom profile missing or wrong length");
      if (custom->minCoeff() < 0.0) throw ArgumentError("row_profile: negative probability");
      const double total = custom->sum();
      if (total <= 0.0) throw ArgumentError("row_profile: profile sum must be positive");
      return *custom / total;
    }
  }
  throw ArgumentError("row_profile: unknown scheme kind");
}

Vector row_profile(const SamplingScheme& scheme) {
  const Vector* custom =
      (scheme.kind == SchemeKind::CustomRowProfile) ? &scheme.custom_profile : nullptr;
  return row_profile_for_dim(scheme.kind, scheme.dt, custom);
}

IndexSampler::IndexSampler(const Vector& row_probs, const Vector& col_probs) {
  auto cdf = [](const Vector& p) {
    Vector c(p.size());
    double acc = 0.0;
    for (Index i = 0; i < p.size(); ++i) {
      acc += p(i);
      c(i) = acc;
    }
    c(p.size() - 1) = 1.0;  // guard against rounding at the top
    return c;
  };
  row_cdf_ = cdf(row_probs);
  col_cdf_ = cdf(col_probs);
}

std::pair<Index, Index> IndexSampler::draw(Rng& rng) const {
  auto pick = [&rng](const Vector& c) {
    const double u = rng.uniform01();
    const double* begin = c.data();
    const double* end = c.data() + c.size();
    return static_cast<Index>(std::upper_bound(begin, end, u) - begin);
  };
  return {pick(row_cdf_), pick(col_cdf_)};
}

ObservationSet draw_observations(const GroundTruth& truth, const SamplingScheme& scheme,
                                 double sigma, std::uint64_t seed) {
  const Index dt = scheme.dt;
  if (truth.m0.rows() != dt || truth.m0.cols() != dt)
    throw ArgumentError("draw_observations: scheme dimension does not match ground truth");
  if (sigma < 0.0) throw ArgumentError("draw_observations: sigma must be nonnegative");
  const double cells = static_cast<double>(dt) * static_cast<double>(dt);
  const auto n = static_cast<std::int64_t>(std::llround(scheme.sr * cells));
  if (n < 1) throw ArgumentError("draw_observations: sr*dt^2 must be at least 1");
  if (!scheme.replacement && static_cast<double>(n) > cells)
    throw ArgumentError("draw_observations: sr > 1 requires replacement");

  const Vector p = row_profile(scheme);
  IndexSampler sampler(p, p);
  Rng rng(seed);
  const double noise_scale = sigma * truth.m0.cwiseAbs().maxCoeff();

  ObservationSet obs(dt, dt);
  obs.entries.reserve(static_cast<std::size_t>(n));
  std::unordered_set<std::int64_t> seen;
  if (!scheme.replacement) seen.reserve(static_cast<std::size_t>(n) * 2);

  while (obs.entries.size() < static_cast<std::size_t>(n)) {
    auto [k, l] = sampler.draw(rng);
    if (!scheme.replacement) {
      const std::int64_t key = static_cast<std::int64_t>(k) * dt + l;
      if (!seen.insert(key).second) continue;
    }
    double value = truth.m0(k, l);
    if (sigma > 0.0) value += rng.normal() * noise_scale;
    obs.entries.push_back({k, l, value});
  }
  return obs;
}

}  // namespace maxnorm
