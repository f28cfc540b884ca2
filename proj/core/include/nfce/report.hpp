#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nfce/harness.hpp"
#include "nfce/spectral.hpp"

namespace nfce {

/// Shortest round-trippable decimal ("%.17g"-class, '.' separator, locale independent).
std::string format_number(double v);

/// Header: n_h,n_v,spacing_wavelengths,estimator,hardware,mean_nmse,mean_kept_fraction,trials,seed.
/// mean_kept_fraction is empty for estimators without DFT masking. If `banner` is given it is
/// written first as a '#' comment line (used for timestamps, excluded from comparisons).
void write_results_csv(std::ostream& out, const std::vector<SummaryRow>& rows,
                       const std::optional<std::string>& banner = std::nullopt);

/// JSON array mirroring the CSV rows.
std::string results_json(const std::vector<SummaryRow>& rows);

/// Header: row_bin,col_bin,normalized_power (row = vertical bin, col = horizontal bin).
void write_spectrum_csv(std::ostream& out, const CenteredSpectrum& spectrum,
                        const std::optional<std::string>& banner = std::nullopt);

/// Kept-fraction table: one row per spacing, one column per subarray size.
struct KeptFractionTable {
  std::vector<SubarraySize> sizes;
  std::vector<double> spacings;
  std::vector<std::vector<double>> fraction;  // [spacing][size]
};

KeptFractionTable kept_fraction_table(const ExperimentResult& result, const std::vector<SubarraySize>& sizes,
                                      const std::vector<double>& spacings);
void write_kept_fraction_csv(std::ostream& out, const KeptFractionTable& table,
                             const std::optional<std::string>& banner = std::nullopt);

}  // namespace nfce
