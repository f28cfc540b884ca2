#include "nfce/subspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#ifdef NFCE_HAVE_LAPACKE
#include <lapacke.h>
#endif

#include "nfce/error.hpp"

namespace nfce {
namespace {

constexpr std::array<char, 8> kBasisMagic{'N', 'F', 'C', 'E', 'B', 'A', 'S', '\0'};
constexpr std::uint32_t kBasisVersion = 1;

void eigen_solver(const RealMatrix& a, RealMatrix& vectors, Eigen::VectorXd& values) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(a);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigendecomposition failed");
  vectors = es.eigenvectors();
  values = es.eigenvalues();
}

#ifdef NFCE_HAVE_LAPACKE
// O(n^2) sanity check on an eigendecomposition using a fixed probe vector: A V x = V diag(w) x
// and V^T V x = x. Catches broken BLAS kernels without an O(n^3) product.
bool plausible_decomposition(const RealMatrix& a, const RealMatrix& v, const Eigen::VectorXd& w) {
  Eigen::VectorXd x(a.rows());
  for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = std::sin(1.0 + 0.7 * static_cast<double>(k));
  const Eigen::VectorXd vx = v * x;
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff()) * x.norm();
  const double eig_err = (a * vx - v * (w.cwiseProduct(x))).norm();
  const double orth_err = (v.transpose() * vx - x).norm();
  const double tol = 1e-8 * std::sqrt(static_cast<double>(a.rows()));
  return std::isfinite(eig_err) && eig_err <= tol * scale && orth_err <= tol * x.norm();
}
#endif

// Ascending eigenpairs of a symmetric matrix.
void symmetric_eigen(const RealMatrix& a, RealMatrix& vectors, Eigen::VectorXd& values) {
#ifdef NFCE_HAVE_LAPACKE
  vectors = a;
  values.resize(a.rows());
  const auto n = static_cast<lapack_int>(a.rows());
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, vectors.data(), n, values.data());
  if (info == 0 && plausible_decomposition(a, vectors, values)) return;
  // Fall through: some OpenBLAS builds pick kernels the host cannot run correctly.
#endif
  eigen_solver(a, vectors, values);
}

void write_raw(std::ofstream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  write_raw(out, &v, sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw PayloadError("basis cache truncated");
  return v;
}

}  // namespace

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

RealMatrix isotropic_correlation(const ArrayConfig& cfg) {
  cfg.validate();
  const auto idx = all_antenna_indices(cfg);
  const auto n = static_cast<Eigen::Index>(idx.size());
  const double scale = 2.0 * cfg.delta / cfg.wavelength;
  RealMatrix r(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    r(m, m) = 1.0;
    for (Eigen::Index k = m + 1; k < n; ++k) {
      const double di = idx[m].i - idx[k].i;
      const double dj = idx[m].j - idx[k].j;
      const double v = sinc(scale * std::sqrt(di * di + dj * dj));
      r(m, k) = v;
      r(k, m) = v;
    }
  }
  return r;
}

SubspaceBasis::SubspaceBasis(RealMatrix eigenvectors, Eigen::VectorXd eigenvalues, Eigen::Index dim,
                             double rel_threshold)
    : vectors_(std::move(eigenvectors)),
      values_(std::move(eigenvalues)),
      dim_(dim),
      rel_threshold_(rel_threshold) {
  if (vectors_.rows() != vectors_.cols() || values_.size() != vectors_.rows())
    throw DomainError("eigenvector matrix must be square and match the eigenvalue count");
  if (dim_ < 1 || dim_ > vectors_.rows()) throw DomainError("subspace dimension out of range");
}

SubspaceBasis reduced_subspace(const RealMatrix& correlation, double rel_threshold) {
  if (correlation.rows() == 0 || correlation.rows() != correlation.cols())
    throw DomainError("correlation matrix must be square and non-empty");
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0))
    throw DomainError("rel_threshold must lie in (0, 1)");

  RealMatrix vecs;
  Eigen::VectorXd vals;
  symmetric_eigen(correlation, vecs, vals);

  // Solver output is ascending; flip to descending.
  const Eigen::Index n = vals.size();
  RealMatrix sorted_vecs = vecs.rowwise().reverse();
  Eigen::VectorXd sorted_vals = vals.reverse();
  if (!sorted_vals.allFinite()) throw NumericalError("non-finite eigenvalues");

  const double cutoff = rel_threshold * sorted_vals(0);
  Eigen::Index s = 0;
  while (s < n && sorted_vals(s) > cutoff) ++s;
  return SubspaceBasis(std::move(sorted_vecs), std::move(sorted_vals), std::max<Eigen::Index>(s, 1),
                       rel_threshold);
}

ChannelVector project(const SubspaceBasis& basis, const ChannelVector& v) {
  if (v.size() != basis.ambient_dim())
    throw DomainError("vector length " + std::to_string(v.size()) + " does not match basis dimension " +
                      std::to_string(basis.ambient_dim()));
  // U is real, so project real and imaginary parts together as an LN x 2 block.
  RealMatrix parts(v.size(), 2);
  parts.col(0) = v.real();
  parts.col(1) = v.imag();
  RealMatrix out;
  if (2 * basis.dim() <= basis.ambient_dim()) {
    const auto u = basis.basis();
    out.noalias() = u * (u.transpose() * parts);
  } else {
    const auto c = basis.complement();
    out = parts;
    out.noalias() -= c * (c.transpose() * parts);
  }
  ChannelVector result(v.size());
  result.real() = out.col(0);
  result.imag() = out.col(1);
  return result;
}

std::uint64_t basis_cache_key(const ArrayConfig& cfg, double rel_threshold) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "v%u|%d|%d|%d|%d|%d|%.17g|%.17g|%.17g", kBasisVersion, cfg.n_h, cfg.n_v,
                cfg.l_h, cfg.l_v, cfg.gap_cells, cfg.delta, cfg.wavelength, rel_threshold);
  // FNV-1a
  std::uint64_t h = 1469598103934665603ULL;
  for (const char* p = buf; *p; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 1099511628211ULL;
  }
  return h;
}

void save_basis(const SubspaceBasis& basis, std::uint64_t key, const std::filesystem::path& file) {
  const auto tmp = std::filesystem::path(file).concat(".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw PayloadError("cannot open basis cache for writing: " + tmp.string());
    write_raw(out, kBasisMagic.data(), kBasisMagic.size());
    write_pod(out, kBasisVersion);
    write_pod(out, key);
    write_pod(out, static_cast<std::int64_t>(basis.ambient_dim()));
    write_pod(out, static_cast<std::int64_t>(basis.dim()));
    write_pod(out, basis.rel_threshold());
    write_raw(out, basis.eigenvalues().data(), sizeof(double) * basis.eigenvalues().size());
    const auto& vecs = basis.eigenvectors();
    std::vector<double> row(2 * static_cast<std::size_t>(vecs.cols()), 0.0);
    for (Eigen::Index r = 0; r < vecs.rows(); ++r) {
      for (Eigen::Index c = 0; c < vecs.cols(); ++c) row[2 * c] = vecs(r, c);
      write_raw(out, row.data(), sizeof(double) * row.size());
    }
    if (!out) throw PayloadError("failed writing basis cache " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

std::optional<SubspaceBasis> load_basis(const std::filesystem::path& file, std::uint64_t key) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;

  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kBasisMagic) throw PayloadError("not a basis cache file: " + file.string());
  if (read_pod<std::uint32_t>(in) != kBasisVersion)
    throw PayloadError("unsupported basis cache version in " + file.string());
  if (read_pod<std::uint64_t>(in) != key) throw PayloadError("basis cache key mismatch in " + file.string());
  const auto n = read_pod<std::int64_t>(in);
  const auto s = read_pod<std::int64_t>(in);
  const auto thr = read_pod<double>(in);
  if (n <= 0 || s <= 0 || s > n) throw PayloadError("corrupt basis cache dimensions");

  Eigen::VectorXd vals(n);
  in.read(reinterpret_cast<char*>(vals.data()), static_cast<std::streamsize>(sizeof(double) * n));
  RealMatrix vecs(n, n);
  std::vector<double> row(2 * static_cast<std::size_t>(n));
  for (std::int64_t r = 0; r < n; ++r) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(sizeof(double) * row.size()));
    if (!in) throw PayloadError("basis cache truncated");
    for (std::int64_t c = 0; c < n; ++c) {
      if (row[2 * c + 1] != 0.0) throw PayloadError("basis cache holds a non-real eigenvector");
      vecs(r, c) = row[2 * c];
    }
  }
  return SubspaceBasis(std::move(vecs), std::move(vals), s, thr);
}

std::shared_ptr<const SubspaceBasis> BasisCache::get(const ArrayConfig& cfg, double rel_threshold) {
  const auto key = basis_cache_key(cfg, rel_threshold);
  std::lock_guard lock(mu_);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  std::optional<std::filesystem::path> file;
  if (dir_) {
    char name[64];
    std::snprintf(name, sizeof name, "basis-%016llx.bin", static_cast<unsigned long long>(key));
    file = *dir_ / name;
    if (auto loaded = load_basis(*file, key)) {
      auto ptr = std::make_shared<const SubspaceBasis>(std::move(*loaded));
      memo_.emplace(key, ptr);
      return ptr;
    }
  }

  auto ptr = std::make_shared<const SubspaceBasis>(
      reduced_subspace(isotropic_correlation(cfg), rel_threshold));
  if (file) {
    std::filesystem::create_directories(*dir_);
    save_basis(*ptr, key, *file);
  }
  memo_.emplace(key, ptr);
  return ptr;
}

}  // namespace nfce
