#ifndef MAXNORM_TESTS_FIXTURES_HPP_
#define MAXNORM_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <string>

#include "maxnorm/types.hpp"

namespace maxnorm::testing {

/// Writes a MovieLens-format ratings file (tab-separated
/// `user item rating timestamp`, 1-based ids) holding `n_ratings` distinct
/// cells of a quantized low-rank score model. Users and items are sampled
/// with a popularity skew, so availability is strongly non-uniform.
void write_synthetic_movielens(const std::string& path, Index n_users, Index n_items,
                               std::int64_t n_ratings, std::uint64_t seed);

/// Writes a Jester-format CSV (count column + 100 rating columns, sentinel
/// 99) for n_users rows of a low-rank score model in [-10, 10].
void write_synthetic_jester(const std::string& path, Index n_users, std::uint64_t seed);

}  // namespace maxnorm::testing

#endif  // MAXNORM_TESTS_FIXTURES_HPP_
