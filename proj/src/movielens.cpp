#include "gsvt/movielens.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <unordered_map>

#include "gsvt/errors.hpp"
#include "gsvt/rng.hpp"
#include "gsvt/synthetic.hpp"

namespace gsvt {

namespace {

template <class T>
bool parse_field(std::string_view field, T& out) {
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& why) {
  throw DataError("ratings line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

RatingsTable parse_ratings(std::istream& in) {
  std::vector<Rating> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::string_view rest(line);
    std::string_view fields[4];
    std::size_t count = 0;
    while (count < 4) {
      const auto tab = rest.find('\t');
      fields[count++] = rest.substr(0, tab);
      if (tab == std::string_view::npos) {
        rest = {};
        break;
      }
      rest = rest.substr(tab + 1);
    }
    if (count != 4 || !rest.empty()) malformed(line_no, "expected 4 tab-separated fields");
    Rating r;
    std::int64_t timestamp = 0;
    if (!parse_field(fields[0], r.user) || !parse_field(fields[1], r.item)) {
      malformed(line_no, "user and item ids must be integers");
    }
    if (!parse_field(fields[2], r.rating) || !std::isfinite(r.rating)) {
      malformed(line_no, "rating must be a number");
    }
    if (!parse_field(fields[3], timestamp)) malformed(line_no, "timestamp must be an integer");
    if (r.user < 1 || r.item < 1) malformed(line_no, "ids are 1-indexed");
    raw.push_back(r);
  }
  if (raw.empty()) throw DataError("ratings file contains no ratings");

  std::map<std::int64_t, Eigen::Index> user_index, item_index;
  for (const auto& r : raw) {
    user_index.emplace(r.user, 0);
    item_index.emplace(r.item, 0);
  }
  Eigen::Index next = 0;
  for (auto& [id, idx] : user_index) idx = next++;
  next = 0;
  for (auto& [id, idx] : item_index) idx = next++;

  RatingsTable table;
  table.users = static_cast<Eigen::Index>(user_index.size());
  table.items = static_cast<Eigen::Index>(item_index.size());
  std::unordered_map<Eigen::Index, std::size_t> slot;
  slot.reserve(raw.size());
  for (const auto& r : raw) {
    const Eigen::Index u = user_index.at(r.user);
    const Eigen::Index i = item_index.at(r.item);
    const auto [it, inserted] = slot.emplace(u * table.items + i, table.entries.size());
    if (inserted) {
      table.entries.push_back({u, i, r.rating});
    } else {
      table.entries[it->second].value = r.rating;
      ++table.duplicates;
    }
  }
  return table;
}

RatingsTable read_ratings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ratings file " + path.string());
  return parse_ratings(in);
}

MovieLensSplit split_ratings(const RatingsTable& table, double holdout_fraction,
                             std::uint64_t seed) {
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0)) {
    throw DomainError("holdout fraction must lie in [0, 1)");
  }
  const auto n = static_cast<Eigen::Index>(table.entries.size());
  const auto held = static_cast<Eigen::Index>(
      std::llround(holdout_fraction * static_cast<double>(n)));
  if (held >= n) throw DomainError("holdout leaves no training ratings");
  const auto test_positions =
      sample_without_replacement(n, held, derive_seed(seed, "movielens-holdout"));

  std::vector<ObservedEntry> train, test;
  train.reserve(static_cast<std::size_t>(n - held));
  test.reserve(static_cast<std::size_t>(held));
  auto next_test = test_positions.begin();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& e = table.entries[static_cast<std::size_t>(i)];
    if (next_test != test_positions.end() && *next_test == i) {
      test.push_back(e);
      ++next_test;
    } else {
      train.push_back(e);
    }
  }
  return {CompletionProblem(table.users, table.items, std::move(train)),
          std::move(test), table.duplicates};
}

MovieLensSplit load_movielens(const std::filesystem::path& path,
                              double holdout_fraction, std::uint64_t seed) {
  return split_ratings(read_ratings(path), holdout_fraction, seed);
}

}  // namespace gsvt
