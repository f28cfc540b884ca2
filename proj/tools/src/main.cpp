#include <iostream>

#include <CLI11.hpp>

#include "nfce_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace nfce::cli;

  CLI::App app{"nfce: near-field channel estimation experiments for modular antenna arrays"};
  app.require_subcommand(1);

  RunManifest manifest;
  std::optional<std::string> config;
  std::optional<std::string> out_dir;
  bool no_timestamp = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON experiment config");
    sub->add_option("--preset", manifest.preset, "Experiment preset")
        ->check(CLI::IsMember({"fig4", "fig5", "table1"}));
    sub->add_option("--seed", manifest.seed, "Master RNG seed");
    sub->add_option("--workers", manifest.workers, "Worker threads for Monte-Carlo trials")
        ->check(CLI::PositiveNumber);
    sub->add_option("--override", manifest.overrides, "Config override key=value (repeatable)");
    sub->add_option("--out", out_dir, "Output directory (default: $NFCE_OUT_DIR or ./nfce-out)");
    sub->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp comment line from outputs");
  };

  auto* run = app.add_subcommand("run", "Monte-Carlo NMSE sweep");
  add_common(run);

  SpectrumArgs spectrum_args;
  auto* spectrum = app.add_subcommand("spectrum", "Full-grid 2D-DFT power spectrum of one observation");
  add_common(spectrum);
  spectrum->add_option("--azimuth", spectrum_args.azimuth, "Azimuth angle in radians");
  spectrum->add_option("--elevation", spectrum_args.elevation, "Elevation angle in radians");
  spectrum->add_option("--range-factor", spectrum_args.range_factor, "UE range as a multiple of the aperture D");

  auto* table1 = app.add_subcommand("table1", "Mean kept 2D-DFT bin fractions per subarray size and spacing");
  add_common(table1);

  CLI11_PARSE(app, argc, argv);

  if (config) manifest.config = *config;
  manifest.out_dir = resolve_out_dir(out_dir ? std::optional<std::filesystem::path>(*out_dir) : std::nullopt);
  manifest.timestamp = !no_timestamp;

  if (run->parsed()) {
    manifest.subcommand = "run";
    return cmd_run(manifest, std::cout, std::cerr);
  }
  if (spectrum->parsed()) {
    manifest.subcommand = "spectrum";
    return cmd_spectrum(manifest, spectrum_args, std::cout, std::cerr);
  }
  manifest.subcommand = "table1";
  return cmd_table1(manifest, std::cout, std::cerr);
}
