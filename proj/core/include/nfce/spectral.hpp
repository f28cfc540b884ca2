#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nfce/geometry.hpp"
#include "nfce/types.hpp"

namespace nfce {

/// Unnormalized forward 2D-DFT: F(q, p) = sum_{r,c} x(r, c) exp(-j 2pi (q r / rows + p c / cols)).
ComplexMatrix dft2(const ComplexMatrix& x);
/// Inverse of dft2 (carries the 1 / (rows * cols) factor).
ComplexMatrix idft2(const ComplexMatrix& f);

struct SpectralBin {
  int row = 0;
  int col = 0;
  cplx value{};

  bool operator==(const SpectralBin&) const = default;
};

/// Sparse 2D-DFT payload: the bins that survive energy masking. This is what a subarray's BBU
/// forwards over the fronthaul.
struct MaskedSpectrum {
  int rows = 0;
  int cols = 0;
  std::vector<SpectralBin> kept;  // descending energy
  double total_energy = 0.0;      // sum |F|^2 over all bins, before masking

  std::size_t payload_size() const { return kept.size(); }
  double kept_energy() const;

  bool operator==(const MaskedSpectrum&) const = default;
};

/// Keep the shortest prefix of bins (by |F|^2 descending, ties by ascending row-major index)
/// whose cumulative energy reaches fraction * total. fraction = 1 keeps every nonzero bin; an
/// all-zero spectrum yields the single (0, 0) bin with value 0.
MaskedSpectrum mask_by_energy(const ComplexMatrix& spectrum, double fraction);

/// Zero-fill dropped bins and invert. Throws PayloadError on out-of-range or duplicate bins.
ComplexMatrix reconstruct(const MaskedSpectrum& masked);

/// Row-major reshape of a raster-scanned subarray vector: rows follow the vertical index j,
/// columns the horizontal index i.
ComplexMatrix to_subarray_grid(const ArrayConfig& cfg, const Eigen::VectorXcd& v);
Eigen::VectorXcd from_subarray_grid(const ComplexMatrix& grid);

/// BBU-side step: reshape y_l / alpha, transform, mask.
MaskedSpectrum mask_subarray_observation(const Eigen::VectorXcd& normalized, const ArrayConfig& cfg,
                                         double fraction);

/// CPU-side inverse of mask_subarray_observation.
Eigen::VectorXcd reconstruct_subarray(const MaskedSpectrum& masked);

/// Centered (zero frequency in the middle) power spectrum over the full gapped raster, normalized
/// to a peak of 1. Matrix index a maps to bin a - rows/2 (and likewise for columns); bin k
/// corresponds to normalized spatial frequency 2k / len.
struct CenteredSpectrum {
  RealMatrix power;  // rows x cols

  int rows() const { return static_cast<int>(power.rows()); }
  int cols() const { return static_cast<int>(power.cols()); }
  int row_bin(int a) const { return a - rows() / 2; }
  int col_bin(int b) const { return b - cols() / 2; }
  /// (vertical bin, horizontal bin) of the maximum.
  std::pair<int, int> peak_bin() const;
};

CenteredSpectrum full_grid_spectrum(const ChannelVector& stacked, const ArrayConfig& cfg);

/// Bin index to normalized spatial frequency in [-1, 1).
inline double spatial_frequency(int bin, int len) { return 2.0 * bin / len; }

// -- Payload serialization -------------------------------------------------------------------------

std::string to_json(const MaskedSpectrum& m);
MaskedSpectrum masked_spectrum_from_json(std::string_view text);

/// Little-endian: "NFCEMSK\0", u32 version, u32 rows, u32 cols, u32 count, f64 total_energy,
/// then count x (u32 row, u32 col, f64 re, f64 im).
std::vector<std::uint8_t> to_binary(const MaskedSpectrum& m);
MaskedSpectrum masked_spectrum_from_binary(const std::vector<std::uint8_t>& bytes);

}  // namespace nfce
