#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gsvt {

using Rng = std::mt19937_64;

/// Seed for the named substream `stream` (and optional index) of a master
/// seed. Distinct names or indices give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                          std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t master, std::string_view stream,
                    std::uint64_t index = 0) {
  return Rng(derive_seed(master, stream, index));
}

}  // namespace gsvt
