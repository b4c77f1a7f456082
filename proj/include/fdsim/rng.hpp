#pragma once

#include <cstdint>
#include <random>

namespace fdsim {

using Rng = std::mt19937_64;

/// Independent stream for one Monte-Carlo drop. The same (base_seed, index)
/// always yields the same generator state, regardless of how many other drops
/// exist or which worker runs it.
inline Rng make_stream(std::uint64_t base_seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(base_seed),
                    static_cast<std::uint32_t>(base_seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

}  // namespace fdsim
