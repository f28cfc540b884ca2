#include "nfce/channel.hpp"

#include <cmath>

#include "nfce/error.hpp"

namespace nfce {
namespace {

// Direction terms shared by both distance forms.
struct Projections {
  double along_h;  // cos(theta) sin(phi)
  double along_v;  // sin(theta)
  double broadside;  // cos(theta) cos(phi)
};

Projections projections(const UePlacement& ue) {
  const double ct = std::cos(ue.elevation);
  return {ct * std::sin(ue.azimuth), std::sin(ue.elevation), ct * std::cos(ue.azimuth)};
}

// r_{l,n} - r without cancellation: (r_{l,n}^2 - r^2) / (r_{l,n} + r).
double path_difference(const ArrayConfig& cfg, const UePlacement& ue, const Projections& pr,
                        const AntennaIndex& idx) {
  const double y = idx.i * cfg.delta;
  const double z = idx.j * cfg.delta;
  const double dx = ue.range * pr.broadside;
  const double dy = ue.range * pr.along_h - y;
  const double dz = ue.range * pr.along_v - z;
  const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
  const double num = -2.0 * ue.range * (y * pr.along_h + z * pr.along_v) + y * y + z * z;
  return num / (dist + ue.range);
}

}  // namespace

void UePlacement::validate() const {
  constexpr double half_pi = kPi / 2.0;
  detail::require(range > 0.0 && std::isfinite(range), "UE range must be positive");
  detail::require(azimuth >= -half_pi && azimuth <= half_pi, "azimuth outside [-pi/2, pi/2]");
  detail::require(elevation >= -half_pi && elevation <= half_pi, "elevation outside [-pi/2, pi/2]");
}

double distance_to_antenna(const ArrayConfig& cfg, const UePlacement& ue, int l, int n) {
  ue.validate();
  const auto idx = antenna_indices(cfg, l, n);
  const auto pr = projections(ue);
  const double a = ue.range * pr.broadside;
  const double b = ue.range * pr.along_h - idx.i * cfg.delta;
  const double c = ue.range * pr.along_v - idx.j * cfg.delta;
  return std::sqrt(a * a + b * b + c * c);
}

double distance_to_antenna_factored(const ArrayConfig& cfg, const UePlacement& ue, int l, int n) {
  ue.validate();
  const auto idx = antenna_indices(cfg, l, n);
  const auto pr = projections(ue);
  const double q = cfg.delta / ue.range;
  const double inner = 1.0 - 2.0 * q * (idx.i * pr.along_h + idx.j * pr.along_v) +
                       q * q * (static_cast<double>(idx.i) * idx.i + static_cast<double>(idx.j) * idx.j);
  return ue.range * std::sqrt(inner);
}

Eigen::VectorXcd subarray_response(const ArrayConfig& cfg, const UePlacement& ue, int l) {
  ue.validate();
  const int n_ant = cfg.antennas_per_subarray();
  const auto pr = projections(ue);
  const double k = 2.0 * kPi / cfg.wavelength;
  Eigen::VectorXcd b(n_ant);
  for (int n = 1; n <= n_ant; ++n) {
    const double phase = -k * path_difference(cfg, ue, pr, antenna_indices(cfg, l, n));
    b(n - 1) = std::polar(1.0, phase);
  }
  return b;
}

ChannelVector full_channel(const ArrayConfig& cfg, const UePlacement& ue, double beta) {
  detail::require(beta > 0.0, "channel gain beta must be positive");
  const int n_ant = cfg.antennas_per_subarray();
  ChannelVector h(cfg.total_antennas());
  const double scale = std::sqrt(beta);
  for (int l = 1; l <= cfg.subarrays(); ++l)
    h.segment((l - 1) * n_ant, n_ant) = scale * subarray_response(cfg, ue, l);
  return h;
}

std::vector<Eigen::VectorXcd> ideal_pilot_observation(const ArrayConfig& cfg, const UePlacement& ue,
                                                      double power, double beta,
                                                      const ChannelVector& noise) {
  detail::require(noise.size() == cfg.total_antennas(), "noise length must equal LN");
  detail::require(power >= 0.0, "transmit power must be non-negative");
  const ChannelVector h_bar = full_channel(cfg, ue, 1.0);
  const double amp = std::sqrt(power * beta);
  return split_blocks(cfg, amp * h_bar + noise);
}

ChannelVector stack_blocks(const std::vector<Eigen::VectorXcd>& blocks) {
  Eigen::Index total = 0;
  for (const auto& b : blocks) total += b.size();
  ChannelVector out(total);
  Eigen::Index offset = 0;
  for (const auto& b : blocks) {
    out.segment(offset, b.size()) = b;
    offset += b.size();
  }
  return out;
}

std::vector<Eigen::VectorXcd> split_blocks(const ArrayConfig& cfg, const ChannelVector& stacked) {
  detail::require(stacked.size() == cfg.total_antennas(), "stacked vector length must equal LN");
  const int n_ant = cfg.antennas_per_subarray();
  std::vector<Eigen::VectorXcd> blocks;
  blocks.reserve(static_cast<std::size_t>(cfg.subarrays()));
  for (int l = 0; l < cfg.subarrays(); ++l) blocks.emplace_back(stacked.segment(l * n_ant, n_ant));
  return blocks;
}

}  // namespace nfce
