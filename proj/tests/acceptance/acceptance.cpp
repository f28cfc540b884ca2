// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nfce/channel.hpp"
#include "nfce/estimators.hpp"
#include "nfce/harness.hpp"
#include "nfce/impairment.hpp"
#include "nfce/spectral.hpp"
#include "nfce/subspace.hpp"
#include "nfce_cli/commands.hpp"
#include "nfce_cli/config.hpp"
#include "oracles.hpp"

using namespace nfce;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int g_trials = 1000;
int g_workers = 1;

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

ExperimentSpec base_spec() {
  ExperimentSpec spec;
  spec.trials = g_trials;
  spec.workers = g_workers;
  return spec;
}

const std::vector<SubarraySize> kSizes{{8, 8}, {12, 12}, {16, 16}, {20, 20}, {24, 24}};

std::vector<double> per_trial(const CellResult& cell, EstimatorKind k) {
  std::vector<double> out;
  out.reserve(cell.trials.size());
  for (const auto& t : cell.trials) out.push_back(*t.nmse_of(k));
  return out;
}

std::string label(const SubarraySize& s) { return std::to_string(s.n_h) + "x" + std::to_string(s.n_v); }

Verdict ls_anchor(BasisCache& cache) {
  auto spec = base_spec();
  spec.lna = LnaParams::ideal();
  spec.estimators = {EstimatorKind::LS};
  spec.include_perfect_hw_reference = false;
  spec.subarray_sizes = {{8, 8}, {16, 16}};
  const auto res = run_experiment(spec, cache);
  Verdict v{true, {}};
  for (const auto& cell : res.cells) {
    const double m = cell.mean_nmse(EstimatorKind::LS);
    v.pass = v.pass && std::abs(m - 0.1) <= 0.005;
    v.detail += label(cell.size) + " LS NMSE " + fmt(m) + "; ";
  }
  v.detail += "target 0.100 +-5%";
  return v;
}

Verdict rs_anchor(BasisCache& cache) {
  auto spec = base_spec();
  spec.lna = LnaParams::ideal();
  spec.estimators = {EstimatorKind::RS_LS};
  spec.include_perfect_hw_reference = false;
  // At lambda/2 the 8x8 layout keeps s = LN, so a lambda/4 cell (s < LN) is checked too.
  spec.spacings = {0.5, 0.25};
  const auto res = run_experiment(spec, cache);
  Verdict v{true, {}};
  for (const auto& cell : res.cells) {
    const double frac = static_cast<double>(*cell.subspace_dim) / cell.cfg.total_antennas();
    const double expect = frac * 0.1;
    const double m = cell.mean_nmse(EstimatorKind::RS_LS);
    v.pass = v.pass && std::abs(m - expect) <= 0.1 * expect;
    v.detail += "spacing " + fmt(cell.spacing) + ": s/LN " + fmt(frac) + ", RS-LS " + fmt(m) + " vs " +
                fmt(expect) + "; ";
  }
  v.detail += "tolerance +-10%";
  return v;
}

// Holds when `lo` is not worse than `hi`: either identical per-trial values or a paired t >= 3.
bool significant_leq(const std::vector<double>& lo, const std::vector<double>& hi, double& t) {
  if (lo == hi) {
    t = 0.0;
    return true;
  }
  t = oracle::paired_t(hi, lo);
  return t >= 3.0;
}

Verdict estimator_ordering(const ExperimentResult& res) {
  using K = EstimatorKind;
  const std::pair<K, K> chain[] = {
      {K::DFT_CM_RS_LS, K::DFT_CM_LS}, {K::DFT_CM_LS, K::CM_LS}, {K::CM_LS, K::LS}, {K::DFT_LS, K::LS}};
  Verdict v{true, {}};
  double min_t = INFINITY;
  int ties = 0;
  for (const auto& size : kSizes) {
    const auto& cell = res.cell(size, 0.5);
    for (auto [lo, hi] : chain) {
      double t = 0.0;
      const auto a = per_trial(cell, lo);
      const auto b = per_trial(cell, hi);
      const bool ok = significant_leq(a, b, t) && cell.mean_nmse(lo) <= cell.mean_nmse(hi);
      if (a == b)
        ++ties;
      else
        min_t = std::min(min_t, t);
      if (!ok) {
        v.pass = false;
        v.detail += label(size) + " " + std::string(to_string(lo)) + " <= " + std::string(to_string(hi)) +
                    " fails (t=" + fmt(t) + "); ";
      }
    }
  }
  v.detail += "20 comparisons, min paired t " + fmt(min_t) + ", identical pairs " + std::to_string(ties);
  return v;
}

Verdict rs_gain_growth(const ExperimentResult& res) {
  auto gap = [&](const SubarraySize& s) {
    const auto& c = res.cell(s, 0.5);
    return c.mean_nmse(EstimatorKind::CM_LS) - c.mean_nmse(EstimatorKind::CM_RS_LS);
  };
  const double g8 = gap({8, 8});
  const double g24 = gap({24, 24});
  return {g24 > g8, "CM-LS minus CM-RS-LS: 8x8 " + fmt(g8) + ", 24x24 " + fmt(g24)};
}

Verdict dense_rs_gain(const ExperimentResult& res) {
  auto ratio = [&](double spacing) {
    const auto& c = res.cell({16, 16}, spacing);
    return c.mean_nmse(EstimatorKind::CM_RS_LS) / c.mean_nmse(EstimatorKind::CM_LS);
  };
  const double half = ratio(0.5);
  const double quarter = ratio(0.25);
  return {quarter < half, "16x16 CM-RS-LS/CM-LS: lambda/4 " + fmt(quarter) + ", lambda/2 " + fmt(half)};
}

Verdict kept_fractions(const ExperimentResult& res) {
  struct Target {
    SubarraySize size;
    double spacing;
    double value;
  };
  const Target targets[] = {{{8, 8}, 0.5, 0.1814},
                            {{16, 16}, 0.5, 0.1064},
                            {{24, 24}, 0.5, 0.0708},
                            {{8, 8}, 0.25, 0.1765},
                            {{24, 24}, 0.25, 0.0694}};
  Verdict v{true, {}};
  for (const auto& t : targets) {
    const double got = res.cell(t.size, t.spacing).mean_kept_fraction();
    v.pass = v.pass && std::abs(got - t.value) <= 0.03;
    v.detail += label(t.size) + "@" + fmt(t.spacing) + " " + fmt(got) + " (" + fmt(t.value) + "); ";
  }
  for (double spacing : {0.5, 0.25}) {
    double prev = INFINITY;
    for (const auto& s : kSizes) {
      const double f = res.cell(s, spacing).mean_kept_fraction();
      if (!(f < prev)) {
        v.pass = false;
        v.detail += "not decreasing at " + label(s) + "@" + fmt(spacing) + "; ";
      }
      prev = f;
    }
  }
  v.detail += "tolerance +-0.03, monotone rows checked";
  return v;
}

Verdict impairment_robustness(const ExperimentResult& res) {
  Verdict v{true, {}};
  double worst = 0.0;
  for (const auto& s : kSizes) {
    const auto& c = res.cell(s, 0.5);
    const double r = c.mean_nmse(EstimatorKind::DFT_CM_RS_LS) / c.mean_perfect_nmse();
    worst = std::max(worst, r);
    v.pass = v.pass && r <= 1.25;
    v.detail += label(s) + " " + fmt(r) + "; ";
  }
  v.detail += "max impaired/perfect " + fmt(worst) + " (limit 1.25)";
  return v;
}

Verdict spectrum_peaks() {
  const auto spec = cli::spec_from_json(cli::preset_document("fig4"));
  struct Case {
    cli::SpectrumArgs args;
    int h;
    int v;
  };
  const Case cases[] = {{{kPi / 4, 0.0, 2.0}, 9, 0}, {{-kPi / 4, -kPi / 3, 2.0}, -5, -11}};
  Verdict v{true, {}};
  for (const auto& c : cases) {
    const auto s = cli::observation_spectrum(spec, c.args);
    const auto [vb, hb] = s.peak_bin();
    const bool ok = s.rows() == 26 && s.cols() == 26 && std::abs(hb - c.h) <= 2 && std::abs(vb - c.v) <= 2;
    v.pass = v.pass && ok;
    v.detail += "peak (h " + std::to_string(hb) + ", v " + std::to_string(vb) + ") vs (" + std::to_string(c.h) +
                ", " + std::to_string(c.v) + "); ";
  }
  v.detail += "26x26 grid, +-2 bins";
  return v;
}

Verdict properties(BasisCache& cache) {
  Verdict v{true, {}};
  auto note = [&](bool ok, const std::string& what) {
    v.pass = v.pass && ok;
    if (!ok) v.detail += what + " FAILED; ";
  };
  ExperimentSpec spec = base_spec();
  std::mt19937_64 rng(2024);

  double unit_err = 0.0;
  const auto cfg8 = spec.cell_config({8, 8}, 0.5);
  for (int t = 0; t < 100; ++t) {
    const auto h = full_channel(cfg8, sample_placement(rng, cfg8));
    unit_err = std::max(unit_err, (h.cwiseAbs().array() - 1.0).abs().maxCoeff());
    const ChannelVector noisy = h + oracle::random_complex(rng, h.size());
    unit_err = std::max(unit_err, (cm(noisy).cwiseAbs().array() - 1.0).abs().maxCoeff());
  }
  note(unit_err < 1e-12, "unit modulus");

  const auto cfg_q = spec.cell_config({8, 8}, 0.25);
  const auto basis = cache.get(cfg_q, spec.rel_threshold);
  const Eigen::MatrixXd u = basis->basis();
  const double semi = (u.transpose() * u - Eigen::MatrixXd::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
  double idem = 0.0;
  for (int t = 0; t < 20; ++t) {
    const ChannelVector x = oracle::random_complex(rng, basis->ambient_dim());
    const auto px = project(*basis, x);
    idem = std::max(idem, (project(*basis, px) - px).norm() / x.norm());
  }
  note(semi < 1e-10 && idem < 1e-10, "projector");

  double rt = 0.0;
  for (auto [r, c] : {std::pair{8, 8}, std::pair{26, 26}, std::pair{12, 20}}) {
    const auto x = oracle::random_complex(rng, r, c);
    rt = std::max(rt, (idft2(dft2(x)) - x).cwiseAbs().maxCoeff());
  }
  note(rt < 1e-10, "DFT round trip");

  double eq = 0.0;
  const cplx alpha = effective_gain(spec.snr_linear(), 1.0, 1.0, spec.lna);
  for (int t = 0; t < 20; ++t) {
    const ChannelVector y = oracle::random_complex(rng, cfg8.total_antennas());
    const auto est = dft_pipeline(split_blocks(cfg8, y), alpha, 1.0, cfg8, DftTail::LS);
    eq = std::max(eq, (est.estimate - ls(y, alpha)).cwiseAbs().maxCoeff());
  }
  note(eq < 1e-10, "lossless pipeline");

  auto par = base_spec();
  par.trials = 32;
  par.spacings = {0.25};
  par.estimators.assign(std::begin(kAllEstimators), std::end(kAllEstimators));
  par.workers = 1;
  const auto serial = run_cell(par, {8, 8}, 0.25, cache);
  par.workers = 4;
  const auto parallel = run_cell(par, {8, 8}, 0.25, cache);
  note(serial.trials == parallel.trials, "parallel/serial equivalence");

  double contain = 0.0;
  for (double spacing : {0.5, 0.25}) {
    const auto cfg = spec.cell_config({8, 8}, spacing);
    const auto b = cache.get(cfg, spec.rel_threshold);
    for (int t = 0; t < 100; ++t) {
      const auto h = full_channel(cfg, sample_placement(rng, cfg));
      contain = std::max(contain, (project(*b, h) - h).squaredNorm() / h.squaredNorm());
    }
  }
  note(contain <= 1e-2, "channel containment");

  v.detail += "unit-modulus err " + fmt(unit_err, 2) + ", semi-unitary " + fmt(semi, 2) + ", idempotency " +
              fmt(idem, 2) + ", DFT round trip " + fmt(rt, 2) + ", lossless pipeline " + fmt(eq, 2) +
              ", parallel==serial " + (serial.trials == parallel.trials ? "yes" : "no") +
              ", containment max " + fmt(contain, 2);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  for (int k = 1; k + 1 < argc; ++k)
    if (std::string(argv[k]) == "--trials") g_trials = std::stoi(argv[k + 1]);
  g_workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  BasisCache cache;
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Verdict()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += v.pass ? 0 : 1;
    std::printf("[%s] %d %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str(), secs);
    std::fflush(stdout);
  };

  report(1, "analytic LS anchor", [&] { return ls_anchor(cache); });
  report(2, "RS noise-rejection anchor", [&] { return rs_anchor(cache); });

  std::optional<ExperimentResult> sweep;
  std::string sweep_error;
  try {
    auto spec = base_spec();
    spec.subarray_sizes = kSizes;
    spec.spacings = {0.5, 0.25};
    sweep = run_experiment(spec, cache);
  } catch (const std::exception& e) {
    sweep_error = e.what();
  }
  auto on_sweep = [&](const std::function<Verdict(const ExperimentResult&)>& f) {
    return [&, f] { return sweep ? f(*sweep) : Verdict{false, "sweep failed: " + sweep_error}; };
  };
  report(3, "estimator ordering at half-wavelength spacing", on_sweep(estimator_ordering));
  report(4, "RS-gain growth with subarray size", on_sweep(rs_gain_growth));
  report(5, "dense-array RS gain", on_sweep(dense_rs_gain));
  report(6, "kept-fraction table", on_sweep(kept_fractions));
  report(7, "impairment robustness", on_sweep(impairment_robustness));
  report(8, "full-grid spectrum peaks", spectrum_peaks);
  report(9, "property suites", [&] { return properties(cache); });

  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures;
}
