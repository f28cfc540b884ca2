#include "nfce_cli/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>

#include "nfce/channel.hpp"
#include "nfce/error.hpp"
#include "nfce/harness.hpp"
#include "nfce/impairment.hpp"
#include "nfce/report.hpp"
#include "nfce/rng.hpp"
#include "nfce/spectral.hpp"
#include "nfce_cli/config.hpp"

namespace nfce::cli {
namespace {

nlohmann::json build_document(const RunManifest& m, std::string_view fallback_preset) {
  nlohmann::json doc;
  if (m.preset) {
    doc = preset_document(*m.preset);
  } else if (m.config) {
    doc = default_document();
  } else {
    doc = preset_document(fallback_preset);
  }
  if (m.config) doc.merge_patch(load_config_file(*m.config));
  for (const auto& o : m.overrides) apply_override(doc, o);
  if (m.seed) doc["seed"] = *m.seed;
  if (m.workers) doc["workers"] = *m.workers;
  return doc;
}

std::optional<std::string> banner(const RunManifest& m) {
  if (!m.timestamp) return std::nullopt;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return "nfce " + m.subcommand + " generated " + buf;
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
  return f;
}

void print_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << std::left << std::setw(7) << "n_h" << std::setw(7) << "n_v" << std::setw(9) << "spacing" << std::setw(15)
      << "estimator" << std::setw(10) << "hardware" << std::setw(14) << "mean_nmse"
      << "kept_fraction\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(7) << r.n_h << std::setw(7) << r.n_v << std::setw(9) << r.spacing
        << std::setw(15) << to_string(r.estimator) << std::setw(10) << to_string(r.hardware) << std::setw(14)
        << std::setprecision(5) << r.mean_nmse;
    if (r.mean_kept_fraction) out << std::setprecision(4) << *r.mean_kept_fraction;
    out << '\n';
  }
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const CellFailure& e) {
    err << "numerical failure in " << e.what() << '\n';
    return kNumericalError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace

std::filesystem::path resolve_out_dir(const std::optional<std::filesystem::path>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("NFCE_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "nfce-out";
}

int cmd_run(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!manifest.preset && !manifest.config)
      throw ConfigParseError("run needs --preset or --config");
    const ExperimentSpec spec = spec_from_json(build_document(manifest, "fig4"));
    const auto result = run_experiment(spec);
    const auto rows = result.rows();

    auto csv = open_output(manifest.out_dir, "results.csv");
    write_results_csv(csv, rows, banner(manifest));
    auto js = open_output(manifest.out_dir, "results.json");
    js << results_json(rows) << '\n';

    print_summary(out, rows);
    out << "wrote " << (manifest.out_dir / "results.csv").string() << '\n';
    return static_cast<int>(kOk);
  });
}

CenteredSpectrum observation_spectrum(const ExperimentSpec& spec, const SpectrumArgs& args) {
  const ArrayConfig& cfg = spec.array;
  if (!(args.range_factor > 0.0)) throw ConfigParseError("range factor must be positive");
  UePlacement ue{args.azimuth, args.elevation, args.range_factor * aperture(cfg)};
  try {
    ue.validate();
  } catch (const DomainError& e) {
    throw ConfigParseError(e.what());
  }
  const double power = spec.snr_linear();
  auto rng = substream(spec.seed, 0, StreamTag::Noise);
  const ChannelVector noise = complex_gaussian(rng, cfg.total_antennas(), 1.0);
  const auto clean = ideal_pilot_observation(cfg, ue, power, 1.0, noise);
  const ChannelVector impaired = lna_distort(stack_blocks(clean), spec.lna, power, 1.0);
  return full_grid_spectrum(impaired, cfg);
}

int cmd_spectrum(const RunManifest& manifest, const SpectrumArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentSpec spec = spec_from_json(build_document(manifest, "fig4"));
    const auto spectrum = observation_spectrum(spec, args);

    auto csv = open_output(manifest.out_dir, "spectrum.csv");
    write_spectrum_csv(csv, spectrum, banner(manifest));

    const auto [row_bin, col_bin] = spectrum.peak_bin();
    out << "grid " << spectrum.rows() << "x" << spectrum.cols() << ", peak at horizontal bin " << col_bin
        << " (" << spatial_frequency(col_bin, spectrum.cols()) << "), vertical bin " << row_bin << " ("
        << spatial_frequency(row_bin, spectrum.rows()) << ")\n";
    out << "wrote " << (manifest.out_dir / "spectrum.csv").string() << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_table1(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ExperimentSpec spec = spec_from_json(build_document(manifest, "table1"));
    const auto result = run_experiment(spec);
    const auto table = kept_fraction_table(result, spec.subarray_sizes, spec.spacings);

    auto csv = open_output(manifest.out_dir, "table1.csv");
    write_kept_fraction_csv(csv, table, banner(manifest));
    write_kept_fraction_csv(out, table);
    out << "wrote " << (manifest.out_dir / "table1.csv").string() << '\n';
    return static_cast<int>(kOk);
  });
}

}  // namespace nfce::cli
