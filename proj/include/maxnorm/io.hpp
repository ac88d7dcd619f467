#ifndef MAXNORM_IO_HPP_
#define MAXNORM_IO_HPP_

#include <string>
#include <utility>
#include <vector>

#include "maxnorm/sampling.hpp"
#include "maxnorm/types.hpp"

namespace maxnorm {

/// Sparse rating data (users x items) with the rating bounds.
struct RatingDataset {
  Index n_users = 0;
  Index n_items = 0;
  std::vector<Observation> ratings;
  double r_min = 0.0;
  double r_max = 0.0;
};

/// MovieLens-style file: tab-separated `user item rating timestamp` rows
/// with 1-based ids; dimensions inferred from the largest ids seen.
RatingDataset load_movielens(const std::string& path);

/// Jester-style CSV: per user one row, first column the rating count, then
/// 100 rating columns with 99 marking a missing entry. Range [-10, 10].
RatingDataset load_jester(const std::string& path);

struct RealSplit {
  ObservationSet train;
  ObservationSet test;
  Index n_candidates = 0;      // scheme draws before intersecting
  double realized_ratio = 0.0; // |train| / (n_u * n_items)
};

/// Subsamples n_u users, permutes rows and columns, draws a candidate index
/// set from the scheme at ratio sr, and splits the available ratings into
/// train (candidates hit) and test (the rest).
RealSplit split_real(const RatingDataset& ds, Index n_u, SchemeKind kind, double sr,
                     std::uint64_t seed);

/// Lossless text round-trip for observation sets (shortest exact decimals).
void save_observations(const std::string& path, const ObservationSet& obs);
ObservationSet load_observations(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

/// `key = value` run manifest.
void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace maxnorm

#endif  // MAXNORM_IO_HPP_
