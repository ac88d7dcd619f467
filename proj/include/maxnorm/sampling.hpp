#ifndef MAXNORM_SAMPLING_HPP_
#define MAXNORM_SAMPLING_HPP_

#include <cstdint>
#include <random>

#include "maxnorm/types.hpp"

namespace maxnorm {

/// Seedable generator with portable output: mt19937_64 plus hand-rolled
/// uniform / Box-Muller normal draws, so streams are bit-identical across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free modulo with 64-bit multiply-shift.
    return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n)) % n;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Derives independent sub-stream seeds from a run seed (splitmix64 step).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

enum class SchemeKind { Uniform, Scheme2, Scheme3, CustomRowProfile };

/// Sampling design: pi_{kl} = p_k * p_l with the row profile determined by
/// the scheme kind on a dt x dt grid.
struct SamplingScheme {
  SchemeKind kind = SchemeKind::Uniform;
  Index dt = 0;
  double sr = 0.0;            // sampling ratio, n = round(sr * dt^2)
  bool replacement = false;   // simulation default: without replacement
  Vector custom_profile;      // used by CustomRowProfile (normalized on use)
};

struct GroundTruth {
  Matrix m0;
  Index rank = 0;
  Matrix left;   // dt x r factor
  Matrix right;  // dt x r factor
};

/// M0 = ML * MR^T with iid standard normal factor entries.
GroundTruth gen_ground_truth(Index dt, Index r, std::uint64_t seed);

/// Row (= column) probability profile p for the scheme; sums to one.
/// Scheme 2 weights the first 10% of indices 2x and the next 10% 4x;
/// Scheme 3 uses 3x and 9x. Block boundaries use floor(dt/10), floor(dt/5).
Vector row_profile(const SamplingScheme& scheme);

/// Profile of the given kind for an arbitrary dimension (rectangular grids).
Vector row_profile_for_dim(SchemeKind kind, Index dim, const Vector* custom = nullptr);

/// Draws n = round(sr * dt^2) index pairs from pi = p p^T and observes
/// Y = M0 + sigma * xi * ||M0||_inf at each, xi ~ N(0,1). Without
/// replacement, duplicate pairs are rejected and redrawn.
ObservationSet draw_observations(const GroundTruth& truth, const SamplingScheme& scheme,
                                 double sigma, std::uint64_t seed);

/// Index sampler shared by the simulation and the real-data splitter.
class IndexSampler {
 public:
  IndexSampler(const Vector& row_probs, const Vector& col_probs);

  std::pair<Index, Index> draw(Rng& rng) const;

 private:
  Vector row_cdf_;
  Vector col_cdf_;
};

}  // namespace maxnorm

#endif  // MAXNORM_SAMPLING_HPP_
