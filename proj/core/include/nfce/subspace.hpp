#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "nfce/geometry.hpp"
#include "nfce/types.hpp"

namespace nfce {

/// sinc(x) = sin(pi x) / (pi x), sinc(0) = 1.
double sinc(double x);

/// Spatial correlation of the full modular array under isotropic scattering:
/// R(m, k) = sinc(2 |u_m - u_k| / lambda). The kernel is real, so R is real symmetric.
RealMatrix isotropic_correlation(const ArrayConfig& cfg);

/// Semi-unitary basis U (LN x s) of the dominant eigenspace of an isotropic correlation matrix,
/// together with its orthogonal complement from the same decomposition.
class SubspaceBasis {
 public:
  /// `eigenvectors` holds all LN orthonormal eigenvectors as columns, sorted so that
  /// `eigenvalues` is descending; the first `dim` columns span the retained subspace.
  SubspaceBasis(RealMatrix eigenvectors, Eigen::VectorXd eigenvalues, Eigen::Index dim,
                double rel_threshold);

  Eigen::Index ambient_dim() const { return vectors_.rows(); }
  Eigen::Index dim() const { return dim_; }
  double retained_fraction() const {
    return static_cast<double>(dim_) / static_cast<double>(ambient_dim());
  }
  double rel_threshold() const { return rel_threshold_; }

  auto basis() const { return vectors_.leftCols(dim_); }
  auto complement() const { return vectors_.rightCols(ambient_dim() - dim_); }
  const RealMatrix& eigenvectors() const { return vectors_; }
  const Eigen::VectorXd& eigenvalues() const { return values_; }

 private:
  RealMatrix vectors_;
  Eigen::VectorXd values_;
  Eigen::Index dim_;
  double rel_threshold_;
};

/// Keeps eigenvectors whose eigenvalue exceeds rel_threshold * lambda_max.
/// Throws NumericalError if the eigensolver fails, DomainError on bad arguments.
SubspaceBasis reduced_subspace(const RealMatrix& correlation, double rel_threshold);

/// U U^H v. Evaluated through whichever of U or its complement is thinner.
ChannelVector project(const SubspaceBasis& basis, const ChannelVector& v);

// -- Persistent cache ----------------------------------------------------------------------------

/// Stable 64-bit key over (cfg, rel_threshold).
std::uint64_t basis_cache_key(const ArrayConfig& cfg, double rel_threshold);

/// Versioned binary record: magic, version, key, LN, s, threshold, LN eigenvalues, then the
/// LN x LN eigenvector matrix as row-major complex doubles.
void save_basis(const SubspaceBasis& basis, std::uint64_t key, const std::filesystem::path& file);
/// Returns nullopt if the file is absent; throws PayloadError if it exists but is malformed or
/// was written for a different key.
std::optional<SubspaceBasis> load_basis(const std::filesystem::path& file, std::uint64_t key);

/// Process-wide memo of bases keyed by (cfg, rel_threshold), optionally backed by a directory of
/// cache files. Thread-safe; returned bases are immutable.
class BasisCache {
 public:
  explicit BasisCache(std::optional<std::filesystem::path> dir = std::nullopt)
      : dir_(std::move(dir)) {}

  std::shared_ptr<const SubspaceBasis> get(const ArrayConfig& cfg, double rel_threshold);

 private:
  std::optional<std::filesystem::path> dir_;
  std::mutex mu_;
  std::map<std::uint64_t, std::shared_ptr<const SubspaceBasis>> memo_;
};

}  // namespace nfce
