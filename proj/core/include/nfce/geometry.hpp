#pragma once

#include <vector>

#include <Eigen/Dense>

namespace nfce {

/// Modular UPA layout: l_h x l_v subarrays of n_h x n_v antennas each, placed on a common
/// raster with pitch `delta` and `gap_cells` empty cells between neighbouring subarray edges.
struct ArrayConfig {
  int n_h = 8;
  int n_v = 8;
  int l_h = 2;
  int l_v = 2;
  double delta = 0.01;       // meters
  int gap_cells = 10;        // edge separation in units of delta
  double wavelength = 0.02;  // meters

  int antennas_per_subarray() const { return n_h * n_v; }
  int subarrays() const { return l_h * l_v; }
  int total_antennas() const { return antennas_per_subarray() * subarrays(); }

  /// Throws DomainError if any field is out of range.
  void validate() const;

  bool operator==(const ArrayConfig&) const = default;
};

struct AntennaIndex {
  int i = 0;  // horizontal grid index
  int j = 0;  // vertical grid index

  bool operator==(const AntennaIndex&) const = default;
};

struct GridDims {
  int rows = 0;  // vertical extent
  int cols = 0;  // horizontal extent

  bool operator==(const GridDims&) const = default;
};

/// Grid index of antenna `n` (1-based) in subarray `l` (1-based). Subarray l sits at grid cell
/// ((l-1) mod l_h, floor((l-1)/l_h)); antennas advance horizontally first.
AntennaIndex antenna_indices(const ArrayConfig& cfg, int l, int n);

/// Position u_{l,n} = [0, i*delta, j*delta] in meters; the array lies in the yz-plane.
Eigen::Vector3d antenna_position(const ArrayConfig& cfg, int l, int n);

/// Grid indices of all LN antennas in stacking order (subarray-major).
std::vector<AntennaIndex> all_antenna_indices(const ArrayConfig& cfg);

/// Raster extent of the full modular array including gaps.
GridDims grid_dimensions(const ArrayConfig& cfg);

/// Aperture D: diagonal of the bounding box, counting whole grid cells (so the 2x2, 8x8,
/// gap-10 layout gives 26*sqrt(2)*delta).
double aperture(const ArrayConfig& cfg);

/// 2 D^2 / lambda.
double fraunhofer_distance(const ArrayConfig& cfg);

}  // namespace nfce
