#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nfce/harness.hpp"
#include "nfce/spectral.hpp"

namespace nfce::cli {

/// Everything a subcommand needs from the command line.
struct RunManifest {
  std::string subcommand;
  std::optional<std::filesystem::path> config;
  std::optional<std::string> preset;
  std::filesystem::path out_dir = "nfce-out";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  /// When false, no timestamp banner is written (byte-identical outputs across runs).
  bool timestamp = true;
};

struct SpectrumArgs {
  double azimuth = 0.7853981633974483;  // pi/4
  double elevation = 0.0;
  double range_factor = 2.0;  // r = range_factor * D
};

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kNumericalError = 3 };

/// Spectrum of one impaired, noisy observation at the spec's SNR (noise from substream
/// (seed, 0, Noise)). Throws ConfigParseError for out-of-range angles or range factor.
CenteredSpectrum observation_spectrum(const ExperimentSpec& spec, const SpectrumArgs& args);

/// Monte-Carlo sweep; writes results.csv and results.json into out_dir.
int cmd_run(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Normalized centered 2D power spectrum of one noisy impaired observation; writes spectrum.csv.
int cmd_spectrum(const RunManifest& manifest, const SpectrumArgs& args, std::ostream& out, std::ostream& err);

/// Mean kept-bin fractions over sizes x spacings; writes table1.csv.
int cmd_table1(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Directory resolution: --out if given, else $NFCE_OUT_DIR, else "nfce-out".
std::filesystem::path resolve_out_dir(const std::optional<std::filesystem::path>& flag);

}  // namespace nfce::cli
