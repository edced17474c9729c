#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <vector>

#include "gsvt/completion.hpp"

namespace gsvt {

/// One parsed `user \t item \t rating \t timestamp` line, ids as in the file.
struct Rating {
  std::int64_t user = 0;
  std::int64_t item = 0;
  double rating = 0.0;
};

struct RatingsTable {
  Eigen::Index users = 0;
  Eigen::Index items = 0;
  /// Dense 0-based entries, one per (user, item) pair, in file order.
  std::vector<ObservedEntry> entries;
  /// Repeated (user, item) pairs overwritten by a later line.
  std::size_t duplicates = 0;
};

struct MovieLensSplit {
  CompletionProblem train;
  std::vector<ObservedEntry> test;
  std::size_t duplicates = 0;
};

/// Parses the upstream `u.data` layout. User and item ids are mapped to
/// dense indices by ascending id. Blank lines are skipped; any other
/// malformed line throws DataError naming the line number.
RatingsTable parse_ratings(std::istream& in);
RatingsTable read_ratings(const std::filesystem::path& path);

/// Uniform holdout of round(holdout_fraction·N) ratings as the test set;
/// the rest form the training problem with the full (users × items) shape.
MovieLensSplit split_ratings(const RatingsTable& table, double holdout_fraction,
                             std::uint64_t seed);

MovieLensSplit load_movielens(const std::filesystem::path& path,
                              double holdout_fraction, std::uint64_t seed);

}  // namespace gsvt
