#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nfce/channel.hpp"
#include "nfce/estimators.hpp"
#include "nfce/geometry.hpp"
#include "nfce/impairment.hpp"
#include "nfce/subspace.hpp"

namespace nfce {

struct SubarraySize {
  int n_h = 8;
  int n_v = 8;

  bool operator==(const SubarraySize&) const = default;
};

/// Monte-Carlo sweep description. Noise variance and channel gain are fixed to 1, so the
/// transmit power equals the linear SNR.
struct ExperimentSpec {
  ArrayConfig array;  // layout template; n_h, n_v and delta are replaced per sweep cell
  double snr_db = 10.0;
  LnaParams lna;
  int trials = 1000;
  std::vector<SubarraySize> subarray_sizes{{8, 8}};
  std::vector<double> spacings{0.5};  // in wavelengths
  std::vector<EstimatorKind> estimators{std::begin(kDefaultEstimators), std::end(kDefaultEstimators)};
  bool include_perfect_hw_reference = true;
  std::uint64_t seed = 1;
  double rel_threshold = 1e-5;
  std::optional<double> mask_fraction;  // defaults to SNR / (SNR + 1)
  int workers = 1;
  std::optional<std::filesystem::path> basis_cache_dir;

  void validate() const;
  double snr_linear() const;
  double effective_mask_fraction() const;
  bool needs_subspace() const;
  bool needs_mask() const;
  ArrayConfig cell_config(const SubarraySize& size, double spacing) const;
};

struct TrialRecord {
  UePlacement placement;
  std::array<std::optional<double>, std::size(kAllEstimators)> nmse{};
  /// DFT-CM-RS-LS on the same noise with ideal hardware (a1 = 1, a2 = 0).
  std::optional<double> perfect_nmse;
  std::vector<int> kept_counts;          // per subarray, impaired masking
  std::vector<int> perfect_kept_counts;  // per subarray, ideal-hardware masking

  std::optional<double> nmse_of(EstimatorKind k) const { return nmse[static_cast<std::size_t>(k)]; }
  bool operator==(const TrialRecord&) const = default;
};

/// r ~ U[2D, 2D^2/lambda], azimuth and elevation ~ U[-pi/2, pi/2].
/// Throws ConfigError when the interval is empty (D <= lambda).
UePlacement sample_placement(std::mt19937_64& rng, const ArrayConfig& cfg);

/// |estimate - truth|^2 / |truth|^2.
double nmse(const ChannelVector& estimate, const ChannelVector& truth);

/// One trial of one sweep cell. `basis` may be null when no requested estimator needs it.
TrialRecord run_trial(const ExperimentSpec& spec, const ArrayConfig& cfg, std::uint64_t trial,
                      const SubspaceBasis* basis, double mask_fraction);

enum class HardwareMode { Impaired, Perfect };
std::string_view to_string(HardwareMode mode);

struct SummaryRow {
  int n_h = 0;
  int n_v = 0;
  double spacing = 0.0;  // wavelengths
  EstimatorKind estimator = EstimatorKind::LS;
  HardwareMode hardware = HardwareMode::Impaired;
  double mean_nmse = 0.0;
  std::optional<double> mean_kept_fraction;
  int trials = 0;
  std::uint64_t seed = 0;
};

struct CellResult {
  SubarraySize size;
  double spacing = 0.0;
  ArrayConfig cfg;
  std::optional<Eigen::Index> subspace_dim;
  std::vector<TrialRecord> trials;
  std::vector<SummaryRow> rows;

  /// Trial-order mean of one estimator's NMSE.
  double mean_nmse(EstimatorKind k) const;
  double mean_perfect_nmse() const;
  double mean_kept_fraction() const;
};

struct ExperimentResult {
  std::vector<CellResult> cells;

  std::vector<SummaryRow> rows() const;
  const CellResult& cell(const SubarraySize& size, double spacing) const;
};

/// A sweep cell failed; what() names the cell.
class CellFailure : public std::runtime_error {
 public:
  CellFailure(const std::string& cell, const std::string& reason)
      : std::runtime_error("cell " + cell + ": " + reason), cell_(cell) {}
  const std::string& cell() const { return cell_; }

 private:
  std::string cell_;
};

/// Runs `count` independent jobs on up to `workers` threads; job k must only write slot k.
/// Rethrows the exception of the lowest failing index.
void parallel_for(int count, int workers, const std::function<void(int)>& job);

CellResult run_cell(const ExperimentSpec& spec, const SubarraySize& size, double spacing,
                    BasisCache& cache);

/// Every (size, spacing) cell, in sweep order. Results are independent of spec.workers.
ExperimentResult run_experiment(const ExperimentSpec& spec);
ExperimentResult run_experiment(const ExperimentSpec& spec, BasisCache& cache);

}  // namespace nfce
