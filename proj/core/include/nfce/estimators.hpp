#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nfce/geometry.hpp"
#include "nfce/spectral.hpp"
#include "nfce/subspace.hpp"
#include "nfce/types.hpp"

namespace nfce {

enum class EstimatorKind { LS, CM_LS, RS_LS, CM_RS_LS, DFT_LS, DFT_CM_LS, DFT_CM_RS_LS };

inline constexpr EstimatorKind kAllEstimators[] = {
    EstimatorKind::LS,       EstimatorKind::CM_LS,     EstimatorKind::RS_LS,       EstimatorKind::CM_RS_LS,
    EstimatorKind::DFT_LS,   EstimatorKind::DFT_CM_LS, EstimatorKind::DFT_CM_RS_LS};

/// The six schemes of the default experiment (RS_LS is available but not part of it).
inline constexpr EstimatorKind kDefaultEstimators[] = {
    EstimatorKind::LS,     EstimatorKind::CM_LS,     EstimatorKind::CM_RS_LS,
    EstimatorKind::DFT_LS, EstimatorKind::DFT_CM_LS, EstimatorKind::DFT_CM_RS_LS};

/// "LS", "CM-LS", "RS-LS", "CM-RS-LS", "DFT-LS", "DFT-CM-LS", "DFT-CM-RS-LS".
std::string_view to_string(EstimatorKind kind);
/// Accepts the names above with '-' or '_' separators, case-insensitive.
std::optional<EstimatorKind> parse_estimator(std::string_view name);

bool uses_dft_mask(EstimatorKind kind);
bool uses_subspace(EstimatorKind kind);

/// y_check / alpha.
ChannelVector ls(const ChannelVector& observation, cplx alpha);

/// Phase-only projection onto the unit circle, entry-wise. cm(0) = 1.
ChannelVector cm(const ChannelVector& v);

/// U U^H y_check / alpha.
ChannelVector rs_ls(const ChannelVector& observation, cplx alpha, const SubspaceBasis& basis);

/// cm(U U^H y_check / alpha).
ChannelVector cm_rs_ls(const ChannelVector& observation, cplx alpha, const SubspaceBasis& basis);

/// Result of fronthaul masking: the CPU-side reconstruction of y_check / alpha plus the payload
/// each BBU sent.
struct MaskedObservation {
  ChannelVector reconstructed;
  std::vector<MaskedSpectrum> payloads;

  std::vector<int> kept_counts() const;
};

/// Per subarray: divide by alpha, reshape, 2D-DFT, keep `fraction` of the energy; then invert
/// and concatenate in subarray order.
MaskedObservation mask_observation(const std::vector<Eigen::VectorXcd>& blocks, cplx alpha,
                                   double fraction, const ArrayConfig& cfg);

enum class DftTail { LS, CM_LS, CM_RS_LS };

struct DftEstimate {
  ChannelVector estimate;
  std::vector<MaskedSpectrum> payloads;
};

/// Masked pipeline followed by the tail estimator. alpha is divided out once, at the BBU.
/// `basis` is required iff tail == CM_RS_LS.
DftEstimate dft_pipeline(const std::vector<Eigen::VectorXcd>& blocks, cplx alpha, double fraction,
                         const ArrayConfig& cfg, DftTail tail, const SubspaceBasis* basis = nullptr);

/// Applies the tail to an already-masked observation (alpha already removed).
ChannelVector apply_tail(const ChannelVector& normalized, DftTail tail, const SubspaceBasis* basis);

}  // namespace nfce
