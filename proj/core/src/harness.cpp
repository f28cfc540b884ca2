#include "nfce/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "nfce/error.hpp"
#include "nfce/rng.hpp"

namespace nfce {
namespace {

constexpr double kNoiseVar = 1.0;
constexpr double kBeta = 1.0;

std::string cell_name(const SubarraySize& size, double spacing) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "n_h=%d n_v=%d spacing=%g", size.n_h, size.n_v, spacing);
  return buf;
}

double kept_fraction(const std::vector<int>& counts, int per_subarray) {
  double sum = 0.0;
  for (int c : counts) sum += c;
  return sum / (static_cast<double>(per_subarray) * static_cast<double>(counts.size()));
}

}  // namespace

void ExperimentSpec::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (!std::isfinite(snr_db)) throw ConfigError("snr_db must be finite");
  if (subarray_sizes.empty()) throw ConfigError("subarray_sizes must not be empty");
  if (spacings.empty()) throw ConfigError("spacings must not be empty");
  if (estimators.empty() && !include_perfect_hw_reference) throw ConfigError("no estimators requested");
  for (const auto& s : subarray_sizes)
    if (s.n_h < 1 || s.n_v < 1) throw ConfigError("subarray sizes must be >= 1");
  for (double sp : spacings)
    if (!(sp > 0.0) || !std::isfinite(sp)) throw ConfigError("spacings must be positive");
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) throw ConfigError("rel_threshold must lie in (0, 1)");
  if (mask_fraction && !(*mask_fraction > 0.0 && *mask_fraction <= 1.0))
    throw ConfigError("mask_fraction must lie in (0, 1]");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (lna.a1 == cplx{0.0, 0.0}) throw ConfigError("LNA coefficient a1 must be nonzero");
  try {
    array.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("array: ") + e.what());
  }
}

double ExperimentSpec::snr_linear() const { return std::pow(10.0, snr_db / 10.0); }

double ExperimentSpec::effective_mask_fraction() const {
  if (mask_fraction) return *mask_fraction;
  const double snr = snr_linear();
  return snr / (snr + 1.0);
}

bool ExperimentSpec::needs_subspace() const {
  if (include_perfect_hw_reference) return true;
  for (auto k : estimators)
    if (uses_subspace(k)) return true;
  return false;
}

bool ExperimentSpec::needs_mask() const {
  if (include_perfect_hw_reference) return true;
  for (auto k : estimators)
    if (uses_dft_mask(k)) return true;
  return false;
}

ArrayConfig ExperimentSpec::cell_config(const SubarraySize& size, double spacing) const {
  ArrayConfig cfg = array;
  cfg.n_h = size.n_h;
  cfg.n_v = size.n_v;
  cfg.delta = spacing * array.wavelength;
  return cfg;
}

UePlacement sample_placement(std::mt19937_64& rng, const ArrayConfig& cfg) {
  const double lo = 2.0 * aperture(cfg);
  const double hi = fraunhofer_distance(cfg);
  if (!(lo < hi))
    throw ConfigError("placement interval [2D, 2D^2/lambda] is empty: aperture does not exceed the wavelength");
  std::uniform_real_distribution<double> range(lo, hi);
  std::uniform_real_distribution<double> angle(-kPi / 2.0, kPi / 2.0);
  UePlacement ue;
  ue.range = range(rng);
  ue.azimuth = angle(rng);
  ue.elevation = angle(rng);
  return ue;
}

double nmse(const ChannelVector& estimate, const ChannelVector& truth) {
  detail::require(estimate.size() == truth.size(), "estimate and truth lengths differ");
  const double denom = truth.squaredNorm();
  detail::require(denom > 0.0, "NMSE against a zero channel is undefined");
  return (estimate - truth).squaredNorm() / denom;
}

TrialRecord run_trial(const ExperimentSpec& spec, const ArrayConfig& cfg, std::uint64_t trial,
                      const SubspaceBasis* basis, double mask_fraction) {
  auto placement_rng = substream(spec.seed, trial, StreamTag::Placement);
  auto noise_rng = substream(spec.seed, trial, StreamTag::Noise);

  TrialRecord rec;
  rec.placement = sample_placement(placement_rng, cfg);
  const ChannelVector noise = complex_gaussian(noise_rng, cfg.total_antennas(), kNoiseVar);
  const ChannelVector truth = full_channel(cfg, rec.placement, kBeta);

  const double power = spec.snr_linear() * kNoiseVar / kBeta;
  const double signal_power = power * kBeta;
  const auto clean = ideal_pilot_observation(cfg, rec.placement, power, kBeta, noise);

  std::vector<Eigen::VectorXcd> impaired;
  impaired.reserve(clean.size());
  for (const auto& b : clean) impaired.push_back(lna_distort(b, spec.lna, signal_power, kNoiseVar));
  const cplx alpha = effective_gain(power, kBeta, kNoiseVar, spec.lna);

  auto need_basis = [&]() -> const SubspaceBasis& {
    if (basis == nullptr) throw DomainError("estimator requires a subspace basis");
    return *basis;
  };

  const ChannelVector ls_est = ls(stack_blocks(impaired), alpha);
  std::optional<ChannelVector> projected;
  std::optional<MaskedObservation> masked;

  for (auto kind : spec.estimators) {
    ChannelVector est;
    switch (kind) {
      case EstimatorKind::LS: est = ls_est; break;
      case EstimatorKind::CM_LS: est = cm(ls_est); break;
      case EstimatorKind::RS_LS:
      case EstimatorKind::CM_RS_LS:
        if (!projected) projected = project(need_basis(), ls_est);
        est = kind == EstimatorKind::RS_LS ? *projected : cm(*projected);
        break;
      case EstimatorKind::DFT_LS:
      case EstimatorKind::DFT_CM_LS:
      case EstimatorKind::DFT_CM_RS_LS: {
        if (!masked) {
          masked = mask_observation(impaired, alpha, mask_fraction, cfg);
          rec.kept_counts = masked->kept_counts();
        }
        const DftTail tail = kind == EstimatorKind::DFT_LS      ? DftTail::LS
                             : kind == EstimatorKind::DFT_CM_LS ? DftTail::CM_LS
                                                                : DftTail::CM_RS_LS;
        est = apply_tail(masked->reconstructed, tail, tail == DftTail::CM_RS_LS ? &need_basis() : nullptr);
        break;
      }
    }
    rec.nmse[static_cast<std::size_t>(kind)] = nmse(est, truth);
  }

  if (spec.include_perfect_hw_reference) {
    const LnaParams ideal = LnaParams::ideal();
    std::vector<Eigen::VectorXcd> perfect;
    perfect.reserve(clean.size());
    for (const auto& b : clean) perfect.push_back(lna_distort(b, ideal, signal_power, kNoiseVar));
    const cplx ideal_alpha = effective_gain(power, kBeta, kNoiseVar, ideal);
    auto ref = dft_pipeline(perfect, ideal_alpha, mask_fraction, cfg, DftTail::CM_RS_LS, &need_basis());
    rec.perfect_nmse = nmse(ref.estimate, truth);
    rec.perfect_kept_counts.reserve(ref.payloads.size());
    for (const auto& p : ref.payloads) rec.perfect_kept_counts.push_back(static_cast<int>(p.payload_size()));
  }
  return rec;
}

std::string_view to_string(HardwareMode mode) {
  return mode == HardwareMode::Impaired ? "impaired" : "perfect";
}

double CellResult::mean_nmse(EstimatorKind k) const {
  double sum = 0.0;
  for (const auto& t : trials) {
    const auto v = t.nmse_of(k);
    if (!v) throw DomainError(std::string("estimator ") + std::string(nfce::to_string(k)) + " was not evaluated");
    sum += *v;
  }
  return sum / static_cast<double>(trials.size());
}

double CellResult::mean_perfect_nmse() const {
  double sum = 0.0;
  for (const auto& t : trials) {
    if (!t.perfect_nmse) throw DomainError("perfect-hardware reference was not evaluated");
    sum += *t.perfect_nmse;
  }
  return sum / static_cast<double>(trials.size());
}

double CellResult::mean_kept_fraction() const {
  double sum = 0.0;
  for (const auto& t : trials) {
    if (t.kept_counts.empty()) throw DomainError("no DFT-masked estimator was evaluated");
    sum += kept_fraction(t.kept_counts, cfg.antennas_per_subarray());
  }
  return sum / static_cast<double>(trials.size());
}

std::vector<SummaryRow> ExperimentResult::rows() const {
  std::vector<SummaryRow> out;
  for (const auto& c : cells) out.insert(out.end(), c.rows.begin(), c.rows.end());
  return out;
}

const CellResult& ExperimentResult::cell(const SubarraySize& size, double spacing) const {
  for (const auto& c : cells)
    if (c.size == size && c.spacing == spacing) return c;
  throw DomainError("no such cell: " + cell_name(size, spacing));
}

void parallel_for(int count, int workers, const std::function<void(int)>& job) {
  if (count <= 0) return;
  const int n_threads = std::max(1, std::min(workers, count));
  if (n_threads == 1) {
    for (int k = 0; k < count; ++k) job(k);
    return;
  }

  std::atomic<int> next{0};
  std::mutex err_mu;
  int err_index = count;
  std::exception_ptr err;

  auto worker = [&] {
    for (int k = next.fetch_add(1); k < count; k = next.fetch_add(1)) {
      try {
        job(k);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (k < err_index) {
          err_index = k;
          err = std::current_exception();
        }
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (err) std::rethrow_exception(err);
}

CellResult run_cell(const ExperimentSpec& spec, const SubarraySize& size, double spacing, BasisCache& cache) {
  const std::string name = cell_name(size, spacing);
  try {
    CellResult cell;
    cell.size = size;
    cell.spacing = spacing;
    cell.cfg = spec.cell_config(size, spacing);
    cell.cfg.validate();

    std::shared_ptr<const SubspaceBasis> basis;
    if (spec.needs_subspace()) {
      basis = cache.get(cell.cfg, spec.rel_threshold);
      cell.subspace_dim = basis->dim();
    }
    const double fraction = spec.effective_mask_fraction();

    cell.trials.resize(static_cast<std::size_t>(spec.trials));
    parallel_for(spec.trials, spec.workers, [&](int k) {
      cell.trials[static_cast<std::size_t>(k)] =
          run_trial(spec, cell.cfg, static_cast<std::uint64_t>(k), basis.get(), fraction);
    });

    for (auto kind : spec.estimators) {
      SummaryRow row{size.n_h, size.n_v, spacing, kind, HardwareMode::Impaired,
                     cell.mean_nmse(kind), std::nullopt, spec.trials, spec.seed};
      if (uses_dft_mask(kind)) row.mean_kept_fraction = cell.mean_kept_fraction();
      cell.rows.push_back(row);
    }
    if (spec.include_perfect_hw_reference) {
      double kept = 0.0;
      for (const auto& t : cell.trials) kept += kept_fraction(t.perfect_kept_counts, cell.cfg.antennas_per_subarray());
      cell.rows.push_back({size.n_h, size.n_v, spacing, EstimatorKind::DFT_CM_RS_LS, HardwareMode::Perfect,
                           cell.mean_perfect_nmse(), kept / spec.trials, spec.trials, spec.seed});
    }
    for (const auto& row : cell.rows)
      if (!std::isfinite(row.mean_nmse)) throw NumericalError("non-finite NMSE for " + std::string(nfce::to_string(row.estimator)));
    return cell;
  } catch (const CellFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw CellFailure(name, e.what());
  }
}

ExperimentResult run_experiment(const ExperimentSpec& spec, BasisCache& cache) {
  spec.validate();
  ExperimentResult result;
  for (const auto& size : spec.subarray_sizes)
    for (double spacing : spec.spacings) result.cells.push_back(run_cell(spec, size, spacing, cache));
  return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  BasisCache cache(spec.basis_cache_dir);
  return run_experiment(spec, cache);
}

}  // namespace nfce
