#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "nfce/channel.hpp"
#include "nfce/error.hpp"
#include "nfce/harness.hpp"
#include "nfce/rng.hpp"
#include "oracles.hpp"

using namespace nfce;

namespace {

ExperimentSpec quick_spec(int trials) {
  ExperimentSpec spec;
  spec.trials = trials;
  spec.subarray_sizes = {{8, 8}};
  spec.spacings = {0.25};
  return spec;
}

}  // namespace

TEST_CASE("substreams are deterministic and independent", "[harness][rng]") {
  auto a = substream(1, 5, StreamTag::Noise);
  auto b = substream(1, 5, StreamTag::Noise);
  CHECK(a() == b());
  CHECK(substream(1, 5, StreamTag::Noise)() != substream(1, 5, StreamTag::Placement)());
  CHECK(substream(1, 5, StreamTag::Noise)() != substream(1, 6, StreamTag::Noise)());
  CHECK(substream(1, 5, StreamTag::Noise)() != substream(2, 5, StreamTag::Noise)());
}

TEST_CASE("complex Gaussian noise has the requested variance", "[harness][rng]") {
  auto rng = substream(3, 0, StreamTag::Noise);
  const auto w = complex_gaussian(rng, 200000, 2.0);
  const double var = w.squaredNorm() / static_cast<double>(w.size());
  CHECK(var == Approx(2.0).epsilon(0.01));
  CHECK(w.real().squaredNorm() / static_cast<double>(w.size()) == Approx(1.0).epsilon(0.02));
  CHECK(std::abs(w.mean()) < 0.01);
}

TEST_CASE("placement sampling", "[harness]") {
  const ArrayConfig cfg;
  const double lo = 2.0 * aperture(cfg);
  const double hi = fraunhofer_distance(cfg);
  CHECK(lo == Approx(0.735).epsilon(1e-3));
  CHECK(hi == Approx(13.52).epsilon(1e-3));
  std::mt19937_64 rng(1);
  double sum = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const auto ue = sample_placement(rng, cfg);
    REQUIRE(ue.range >= lo);
    REQUIRE(ue.range <= hi);
    REQUIRE(std::abs(ue.azimuth) <= kPi / 2);
    REQUIRE(std::abs(ue.elevation) <= kPi / 2);
    sum += ue.range;
  }
  CHECK(sum / n == Approx(0.5 * (lo + hi)).epsilon(0.01));

  const ArrayConfig tiny{1, 1, 1, 1, 0.01, 0, 0.02};
  CHECK_THROWS_AS(sample_placement(rng, tiny), ConfigError);
}

TEST_CASE("nmse", "[harness]") {
  const auto h = full_channel(ArrayConfig{}, UePlacement{0.2, 0.3, 3.0});
  CHECK(nmse(h, h) == 0.0);
  CHECK(nmse(ChannelVector::Zero(h.size()), h) == Approx(1.0));
  CHECK(nmse(2.0 * h, h) == Approx(1.0));
  CHECK_THROWS_AS(nmse(h, ChannelVector::Zero(h.size())), DomainError);
  CHECK_THROWS_AS(nmse(h.head(3), h), DomainError);
}

TEST_CASE("spec validation", "[harness]") {
  auto spec = quick_spec(1);
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.effective_mask_fraction() == Approx(10.0 / 11.0));
  spec.trials = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = quick_spec(1);
  spec.spacings = {};
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = quick_spec(1);
  spec.mask_fraction = 1.5;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = quick_spec(1);
  spec.estimators = {};
  CHECK_NOTHROW(spec.validate());
  spec.include_perfect_hw_reference = false;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = quick_spec(1);
  spec.workers = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("trial records are reproducible", "[harness]") {
  auto spec = quick_spec(1);
  spec.estimators.assign(std::begin(kAllEstimators), std::end(kAllEstimators));
  const auto cfg = spec.cell_config({8, 8}, 0.25);
  const auto basis = reduced_subspace(isotropic_correlation(cfg), spec.rel_threshold);
  const auto a = run_trial(spec, cfg, 17, &basis, 10.0 / 11.0);
  const auto b = run_trial(spec, cfg, 17, &basis, 10.0 / 11.0);
  CHECK(a == b);
  CHECK_FALSE(a == run_trial(spec, cfg, 18, &basis, 10.0 / 11.0));
  for (auto k : kAllEstimators) {
    REQUIRE(a.nmse_of(k).has_value());
    CHECK(std::isfinite(*a.nmse_of(k)));
  }
  REQUIRE(a.perfect_nmse.has_value());
  CHECK(a.kept_counts.size() == 4);
  CHECK(a.perfect_kept_counts.size() == 4);
  for (int k : a.kept_counts) CHECK(k <= 64);

  spec.estimators = {EstimatorKind::LS};
  spec.include_perfect_hw_reference = false;
  const auto c = run_trial(spec, cfg, 17, nullptr, 10.0 / 11.0);
  CHECK(c.nmse_of(EstimatorKind::LS) == a.nmse_of(EstimatorKind::LS));
  CHECK(c.placement == a.placement);
  CHECK_FALSE(c.nmse_of(EstimatorKind::CM_LS).has_value());
  CHECK(c.kept_counts.empty());
}

TEST_CASE("perfect-hardware reference uses the same noise", "[harness]") {
  auto spec = quick_spec(1);
  spec.lna = LnaParams::ideal();
  const auto cfg = spec.cell_config({8, 8}, 0.25);
  const auto basis = reduced_subspace(isotropic_correlation(cfg), spec.rel_threshold);
  const auto r = run_trial(spec, cfg, 3, &basis, 10.0 / 11.0);
  CHECK(r.perfect_nmse == r.nmse_of(EstimatorKind::DFT_CM_RS_LS));
  CHECK(r.perfect_kept_counts == r.kept_counts);
}

TEST_CASE("parallel and serial runs are bit-identical", "[harness][property]") {
  auto spec = quick_spec(24);
  spec.estimators.assign(std::begin(kAllEstimators), std::end(kAllEstimators));
  BasisCache cache;
  spec.workers = 1;
  const auto serial = run_cell(spec, {8, 8}, 0.25, cache);
  spec.workers = 4;
  const auto parallel = run_cell(spec, {8, 8}, 0.25, cache);
  REQUIRE(serial.trials.size() == parallel.trials.size());
  for (std::size_t k = 0; k < serial.trials.size(); ++k) CHECK(serial.trials[k] == parallel.trials[k]);
  for (auto k : kAllEstimators) CHECK(serial.mean_nmse(k) == parallel.mean_nmse(k));
}

TEST_CASE("parallel_for reports the lowest failing job", "[harness]") {
  std::vector<int> done(10, 0);
  parallel_for(10, 3, [&](int k) { done[static_cast<std::size_t>(k)] = 1; });
  CHECK(std::count(done.begin(), done.end(), 1) == 10);
  try {
    parallel_for(10, 3, [](int k) {
      if (k == 4 || k == 7) throw std::runtime_error("job " + std::to_string(k));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "job 4");
  }
}

TEST_CASE("cell failures name the cell", "[harness]") {
  auto spec = quick_spec(2);
  spec.spacings = {0.5};
  spec.lna = LnaParams{{1.0, 0.0}, {-1.1, 0.0}};
  BasisCache cache;
  try {
    run_cell(spec, {8, 8}, 0.5, cache);
    FAIL("expected CellFailure");
  } catch (const CellFailure& e) {
    CHECK(e.cell().find("n_h=8") != std::string::npos);
    CHECK(e.cell().find("spacing=0.5") != std::string::npos);
  }
}

TEST_CASE("least-squares NMSE with ideal hardware is 1/SNR", "[harness][montecarlo]") {
  auto spec = quick_spec(1000);
  spec.spacings = {0.5};
  spec.lna = LnaParams::ideal();
  spec.estimators = {EstimatorKind::LS};
  spec.include_perfect_hw_reference = false;
  const auto result = run_experiment(spec);
  CHECK(result.cells.at(0).mean_nmse(EstimatorKind::LS) == Approx(0.1).epsilon(0.05));
}

TEST_CASE("reduced-subspace NMSE tracks the retained fraction", "[harness][montecarlo]") {
  auto spec = quick_spec(1000);
  spec.lna = LnaParams::ideal();
  spec.estimators = {EstimatorKind::RS_LS};
  spec.include_perfect_hw_reference = false;
  const auto result = run_experiment(spec);
  const auto& cell = result.cells.at(0);
  REQUIRE(cell.subspace_dim.has_value());
  const double expected = static_cast<double>(*cell.subspace_dim) / cell.cfg.total_antennas() * 0.1;
  CHECK(cell.mean_nmse(EstimatorKind::RS_LS) == Approx(expected).epsilon(0.1));
}

TEST_CASE("summary rows and kept fractions", "[harness]") {
  auto spec = quick_spec(10);
  spec.subarray_sizes = {{8, 8}, {12, 12}};
  const auto result = run_experiment(spec);
  const auto rows = result.rows();
  CHECK(rows.size() == 2 * (spec.estimators.size() + 1));
  for (const auto& r : rows) {
    CHECK(std::isfinite(r.mean_nmse));
    CHECK(r.trials == 10);
    CHECK(r.mean_kept_fraction.has_value() == uses_dft_mask(r.estimator));
    if (r.estimator != EstimatorKind::LS && r.estimator != EstimatorKind::DFT_LS) CHECK(r.mean_nmse <= 4.0);
  }
  CHECK(result.cell({12, 12}, 0.25).size == SubarraySize{12, 12});
  CHECK_THROWS(result.cell({16, 16}, 0.25));
}
