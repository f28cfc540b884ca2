#include "nfce/geometry.hpp"

#include <cmath>
#include <string>

#include "nfce/error.hpp"

namespace nfce {

void ArrayConfig::validate() const {
  detail::require(n_h >= 1 && n_v >= 1, "antennas per subarray must be >= 1 in each direction");
  detail::require(l_h >= 1 && l_v >= 1, "subarray counts must be >= 1 in each direction");
  detail::require(gap_cells >= 0, "gap_cells must be non-negative");
  detail::require(delta > 0.0 && std::isfinite(delta), "element spacing must be positive");
  detail::require(wavelength > 0.0 && std::isfinite(wavelength), "wavelength must be positive");
}

AntennaIndex antenna_indices(const ArrayConfig& cfg, int l, int n) {
  if (l < 1 || l > cfg.subarrays())
    throw DomainError("subarray index " + std::to_string(l) + " outside 1.." +
                      std::to_string(cfg.subarrays()));
  if (n < 1 || n > cfg.antennas_per_subarray())
    throw DomainError("antenna index " + std::to_string(n) + " outside 1.." +
                      std::to_string(cfg.antennas_per_subarray()));

  const int g_h = (l - 1) % cfg.l_h;
  const int g_v = (l - 1) / cfg.l_h;
  return {g_h * (cfg.n_h + cfg.gap_cells) + (n - 1) % cfg.n_h,
          g_v * (cfg.n_v + cfg.gap_cells) + (n - 1) / cfg.n_h};
}

Eigen::Vector3d antenna_position(const ArrayConfig& cfg, int l, int n) {
  const auto idx = antenna_indices(cfg, l, n);
  return {0.0, idx.i * cfg.delta, idx.j * cfg.delta};
}

std::vector<AntennaIndex> all_antenna_indices(const ArrayConfig& cfg) {
  std::vector<AntennaIndex> out;
  out.reserve(static_cast<std::size_t>(cfg.total_antennas()));
  for (int l = 1; l <= cfg.subarrays(); ++l)
    for (int n = 1; n <= cfg.antennas_per_subarray(); ++n) out.push_back(antenna_indices(cfg, l, n));
  return out;
}

GridDims grid_dimensions(const ArrayConfig& cfg) {
  return {cfg.l_v * cfg.n_v + (cfg.l_v - 1) * cfg.gap_cells,
          cfg.l_h * cfg.n_h + (cfg.l_h - 1) * cfg.gap_cells};
}

double aperture(const ArrayConfig& cfg) {
  const auto dims = grid_dimensions(cfg);
  return cfg.delta * std::hypot(static_cast<double>(dims.cols), static_cast<double>(dims.rows));
}

double fraunhofer_distance(const ArrayConfig& cfg) {
  const double d = aperture(cfg);
  return 2.0 * d * d / cfg.wavelength;
}

}  // namespace nfce
