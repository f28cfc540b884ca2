#include "nfce/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "nfce/channel.hpp"
#include "nfce/error.hpp"

namespace nfce {

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::LS: return "LS";
    case EstimatorKind::CM_LS: return "CM-LS";
    case EstimatorKind::RS_LS: return "RS-LS";
    case EstimatorKind::CM_RS_LS: return "CM-RS-LS";
    case EstimatorKind::DFT_LS: return "DFT-LS";
    case EstimatorKind::DFT_CM_LS: return "DFT-CM-LS";
    case EstimatorKind::DFT_CM_RS_LS: return "DFT-CM-RS-LS";
  }
  return "?";
}

std::optional<EstimatorKind> parse_estimator(std::string_view name) {
  std::string norm(name);
  std::transform(norm.begin(), norm.end(), norm.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::toupper(c));
  });
  for (auto k : kAllEstimators)
    if (to_string(k) == norm) return k;
  return std::nullopt;
}

bool uses_dft_mask(EstimatorKind kind) {
  return kind == EstimatorKind::DFT_LS || kind == EstimatorKind::DFT_CM_LS ||
         kind == EstimatorKind::DFT_CM_RS_LS;
}

bool uses_subspace(EstimatorKind kind) {
  return kind == EstimatorKind::RS_LS || kind == EstimatorKind::CM_RS_LS ||
         kind == EstimatorKind::DFT_CM_RS_LS;
}

ChannelVector ls(const ChannelVector& observation, cplx alpha) {
  if (alpha == cplx{0.0, 0.0}) throw DegenerateHardwareError("cannot normalize by alpha = 0");
  return observation / alpha;
}

ChannelVector cm(const ChannelVector& v) {
  ChannelVector out(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double mag = std::abs(v(k));
    out(k) = mag == 0.0 ? cplx{1.0, 0.0} : std::polar(1.0, std::arg(v(k)));
  }
  return out;
}

ChannelVector rs_ls(const ChannelVector& observation, cplx alpha, const SubspaceBasis& basis) {
  return project(basis, ls(observation, alpha));
}

ChannelVector cm_rs_ls(const ChannelVector& observation, cplx alpha, const SubspaceBasis& basis) {
  return cm(rs_ls(observation, alpha, basis));
}

std::vector<int> MaskedObservation::kept_counts() const {
  std::vector<int> out;
  out.reserve(payloads.size());
  for (const auto& p : payloads) out.push_back(static_cast<int>(p.payload_size()));
  return out;
}

MaskedObservation mask_observation(const std::vector<Eigen::VectorXcd>& blocks, cplx alpha,
                                   double fraction, const ArrayConfig& cfg) {
  if (static_cast<int>(blocks.size()) != cfg.subarrays())
    throw DomainError("expected one observation block per subarray");
  if (alpha == cplx{0.0, 0.0}) throw DegenerateHardwareError("cannot normalize by alpha = 0");

  const int n_ant = cfg.antennas_per_subarray();
  MaskedObservation out{ChannelVector(cfg.total_antennas()), {}};
  out.payloads.reserve(blocks.size());
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    auto payload = mask_subarray_observation(blocks[l] / alpha, cfg, fraction);
    out.reconstructed.segment(static_cast<Eigen::Index>(l) * n_ant, n_ant) = reconstruct_subarray(payload);
    out.payloads.push_back(std::move(payload));
  }
  return out;
}

ChannelVector apply_tail(const ChannelVector& normalized, DftTail tail, const SubspaceBasis* basis) {
  switch (tail) {
    case DftTail::LS: return normalized;
    case DftTail::CM_LS: return cm(normalized);
    case DftTail::CM_RS_LS:
      if (basis == nullptr) throw DomainError("CM-RS-LS tail requires a subspace basis");
      return cm(project(*basis, normalized));
  }
  throw DomainError("unknown DFT tail");
}

DftEstimate dft_pipeline(const std::vector<Eigen::VectorXcd>& blocks, cplx alpha, double fraction,
                         const ArrayConfig& cfg, DftTail tail, const SubspaceBasis* basis) {
  if ((tail == DftTail::CM_RS_LS) != (basis != nullptr))
    throw DomainError("a subspace basis must be given exactly when the tail is CM-RS-LS");
  auto masked = mask_observation(blocks, alpha, fraction, cfg);
  return {apply_tail(masked.reconstructed, tail, basis), std::move(masked.payloads)};
}

}  // namespace nfce
