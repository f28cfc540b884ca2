#pragma once

#include <vector>

#include "nfce/geometry.hpp"
#include "nfce/types.hpp"

namespace nfce {

/// UE location in spherical coordinates about the global origin (the reference corner).
struct UePlacement {
  double azimuth = 0.0;    // radians, [-pi/2, pi/2]
  double elevation = 0.0;  // radians, [-pi/2, pi/2]
  double range = 1.0;      // meters, > 0

  void validate() const;

  bool operator==(const UePlacement&) const = default;
};

/// Exact distance between antenna (l, n) and the UE (Cartesian square root, no Fresnel
/// approximation).
double distance_to_antenna(const ArrayConfig& cfg, const UePlacement& ue, int l, int n);

/// Same distance evaluated through the factored form r * sqrt(1 - 2(delta/r)(...) + ...).
/// Kept as an independent algebraic route for cross-checking.
double distance_to_antenna_factored(const ArrayConfig& cfg, const UePlacement& ue, int l, int n);

/// b_l: entry n is exp(-j 2pi/lambda (r_{l,n} - r)).
Eigen::VectorXcd subarray_response(const ArrayConfig& cfg, const UePlacement& ue, int l);

/// sqrt(beta) * [b_1; ...; b_L]. With beta = 1 this is the normalized channel.
ChannelVector full_channel(const ArrayConfig& cfg, const UePlacement& ue, double beta = 1.0);

/// Distortion-free pilot observation at the LNA inputs, one block per subarray:
/// y_l = sqrt(p beta) b_l + w_l. `noise` is the stacked length-LN noise realization.
std::vector<Eigen::VectorXcd> ideal_pilot_observation(const ArrayConfig& cfg, const UePlacement& ue,
                                                      double power, double beta,
                                                      const ChannelVector& noise);

ChannelVector stack_blocks(const std::vector<Eigen::VectorXcd>& blocks);
std::vector<Eigen::VectorXcd> split_blocks(const ArrayConfig& cfg, const ChannelVector& stacked);

}  // namespace nfce
