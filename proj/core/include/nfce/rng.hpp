#pragma once

#include <cstdint>
#include <random>

#include "nfce/types.hpp"

namespace nfce {

enum class StreamTag : std::uint64_t { Placement = 1, Noise = 2 };

/// Independent generator for (seed, trial, tag). Draws for one tag never depend on how many
/// numbers another tag or trial consumed, so results do not change with scheduling.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t trial, StreamTag tag);

/// i.i.d. CN(0, variance) entries: real and imaginary parts N(0, variance / 2).
ChannelVector complex_gaussian(std::mt19937_64& rng, Eigen::Index size, double variance);

}  // namespace nfce
