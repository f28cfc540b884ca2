#include "nfce/rng.hpp"

#include <cmath>

namespace nfce {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t trial, StreamTag tag) {
  std::uint64_t k = splitmix64(seed);
  k = splitmix64(k ^ trial);
  k = splitmix64(k ^ static_cast<std::uint64_t>(tag));
  return std::mt19937_64(k);
}

ChannelVector complex_gaussian(std::mt19937_64& rng, Eigen::Index size, double variance) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::sqrt(variance / 2.0);
  ChannelVector out(size);
  for (Eigen::Index k = 0; k < size; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    out(k) = {scale * re, scale * im};
  }
  return out;
}

}  // namespace nfce
