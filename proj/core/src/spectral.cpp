#include "nfce/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>

#include <json.hpp>

#include "nfce/error.hpp"

namespace nfce {
namespace {

constexpr std::uint32_t kMaskVersion = 1;
constexpr char kMaskMagic[8] = {'N', 'F', 'C', 'E', 'M', 'S', 'K', '\0'};

// W(a, b) = exp(sign * j 2pi a b / n), with a*b reduced mod n before the trig call.
ComplexMatrix dft_matrix(Eigen::Index n, double sign) {
  ComplexMatrix w(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const auto k = (a * b) % n;
      w(a, b) = std::polar(1.0, sign * 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
    }
  return w;
}

void validate_bins(const MaskedSpectrum& m) {
  if (m.rows <= 0 || m.cols <= 0) throw PayloadError("masked spectrum has empty dimensions");
  if (m.kept.size() > static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(m.cols))
    throw PayloadError("masked spectrum holds more bins than the grid");
  std::vector<char> seen(static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(m.cols), 0);
  for (const auto& b : m.kept) {
    if (b.row < 0 || b.row >= m.rows || b.col < 0 || b.col >= m.cols)
      throw PayloadError("bin (" + std::to_string(b.row) + ", " + std::to_string(b.col) +
                         ") outside " + std::to_string(m.rows) + "x" + std::to_string(m.cols) + " grid");
    auto& flag = seen[static_cast<std::size_t>(b.row) * m.cols + b.col];
    if (flag) throw PayloadError("duplicate bin in masked spectrum");
    flag = 1;
  }
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int s = 0; s < 64; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

struct Reader {
  const std::vector<std::uint8_t>& buf;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > buf.size()) throw PayloadError("masked spectrum record truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(buf[pos + k]) << (8 * k);
    pos += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(buf[pos + k]) << (8 * k);
    pos += 8;
    return std::bit_cast<double>(v);
  }
};

}  // namespace

ComplexMatrix dft2(const ComplexMatrix& x) {
  if (x.size() == 0) return x;
  return dft_matrix(x.rows(), -1.0) * x * dft_matrix(x.cols(), -1.0);
}

ComplexMatrix idft2(const ComplexMatrix& f) {
  if (f.size() == 0) return f;
  const double scale = 1.0 / static_cast<double>(f.rows() * f.cols());
  return (dft_matrix(f.rows(), 1.0) * f * dft_matrix(f.cols(), 1.0)) * scale;
}

double MaskedSpectrum::kept_energy() const {
  double e = 0.0;
  for (const auto& b : kept) e += std::norm(b.value);
  return e;
}

MaskedSpectrum mask_by_energy(const ComplexMatrix& spectrum, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw DomainError("mask fraction must lie in (0, 1]");
  const auto rows = static_cast<int>(spectrum.rows());
  const auto cols = static_cast<int>(spectrum.cols());
  if (rows == 0 || cols == 0) throw DomainError("cannot mask an empty spectrum");

  const std::size_t count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  std::vector<double> energy(count);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) energy[static_cast<std::size_t>(r) * cols + c] = std::norm(spectrum(r, c));

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return energy[a] > energy[b]; });

  MaskedSpectrum out{rows, cols, {}, 0.0};
  // Summing in sorted order makes the final cumulative value equal the total bit-for-bit.
  for (auto k : order) out.total_energy += energy[k];

  auto push = [&](std::size_t k) {
    const int r = static_cast<int>(k / cols);
    const int c = static_cast<int>(k % cols);
    out.kept.push_back({r, c, spectrum(r, c)});
  };

  if (out.total_energy == 0.0) {
    out.kept.push_back({0, 0, cplx{0.0, 0.0}});
    return out;
  }

  if (fraction >= 1.0) {
    for (auto k : order) {
      if (energy[k] == 0.0) break;
      push(k);
    }
    return out;
  }

  const double target = fraction * out.total_energy;
  double cumulative = 0.0;
  for (auto k : order) {
    push(k);
    cumulative += energy[k];
    if (cumulative >= target) break;
  }
  return out;
}

ComplexMatrix reconstruct(const MaskedSpectrum& masked) {
  validate_bins(masked);
  ComplexMatrix f = ComplexMatrix::Zero(masked.rows, masked.cols);
  for (const auto& b : masked.kept) f(b.row, b.col) = b.value;
  return idft2(f);
}

ComplexMatrix to_subarray_grid(const ArrayConfig& cfg, const Eigen::VectorXcd& v) {
  if (v.size() != cfg.antennas_per_subarray())
    throw DomainError("subarray vector length " + std::to_string(v.size()) + " != N = " +
                      std::to_string(cfg.antennas_per_subarray()));
  ComplexMatrix g(cfg.n_v, cfg.n_h);
  for (int j = 0; j < cfg.n_v; ++j)
    for (int i = 0; i < cfg.n_h; ++i) g(j, i) = v(j * cfg.n_h + i);
  return g;
}

Eigen::VectorXcd from_subarray_grid(const ComplexMatrix& grid) {
  const auto cols = grid.cols();
  Eigen::VectorXcd v(grid.size());
  for (Eigen::Index j = 0; j < grid.rows(); ++j)
    for (Eigen::Index i = 0; i < cols; ++i) v(j * cols + i) = grid(j, i);
  return v;
}

MaskedSpectrum mask_subarray_observation(const Eigen::VectorXcd& normalized, const ArrayConfig& cfg,
                                         double fraction) {
  return mask_by_energy(dft2(to_subarray_grid(cfg, normalized)), fraction);
}

Eigen::VectorXcd reconstruct_subarray(const MaskedSpectrum& masked) {
  return from_subarray_grid(reconstruct(masked));
}

std::pair<int, int> CenteredSpectrum::peak_bin() const {
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  power.maxCoeff(&r, &c);
  return {row_bin(static_cast<int>(r)), col_bin(static_cast<int>(c))};
}

CenteredSpectrum full_grid_spectrum(const ChannelVector& stacked, const ArrayConfig& cfg) {
  if (stacked.size() != cfg.total_antennas())
    throw DomainError("observation length must equal LN");
  const auto dims = grid_dimensions(cfg);
  ComplexMatrix grid = ComplexMatrix::Zero(dims.rows, dims.cols);
  const auto idx = all_antenna_indices(cfg);
  for (std::size_t k = 0; k < idx.size(); ++k) grid(idx[k].j, idx[k].i) = stacked(static_cast<Eigen::Index>(k));

  const ComplexMatrix f = dft2(grid);
  CenteredSpectrum out{RealMatrix(dims.rows, dims.cols)};
  const int half_r = dims.rows / 2;
  const int half_c = dims.cols / 2;
  for (int a = 0; a < dims.rows; ++a)
    for (int b = 0; b < dims.cols; ++b) {
      const int src_r = (a - half_r + dims.rows) % dims.rows;
      const int src_c = (b - half_c + dims.cols) % dims.cols;
      out.power(a, b) = std::norm(f(src_r, src_c));
    }
  const double peak = out.power.maxCoeff();
  if (peak > 0.0) out.power /= peak;
  return out;
}

std::string to_json(const MaskedSpectrum& m) {
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& b : m.kept) bins.push_back({b.row, b.col, b.value.real(), b.value.imag()});
  nlohmann::json j{{"version", kMaskVersion},  {"rows", m.rows},
                   {"cols", m.cols},           {"total_energy", m.total_energy},
                   {"bin_count", m.kept.size()}, {"bins", std::move(bins)}};
  return j.dump();
}

MaskedSpectrum masked_spectrum_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw PayloadError(std::string("masked spectrum JSON: ") + e.what());
  }
  try {
    if (j.at("version").get<std::uint32_t>() != kMaskVersion)
      throw PayloadError("unsupported masked spectrum version");
    MaskedSpectrum m;
    m.rows = j.at("rows").get<int>();
    m.cols = j.at("cols").get<int>();
    m.total_energy = j.at("total_energy").get<double>();
    const auto& bins = j.at("bins");
    if (bins.size() != j.at("bin_count").get<std::size_t>())
      throw PayloadError("bin_count does not match the number of bins");
    for (const auto& b : bins) {
      if (!b.is_array() || b.size() != 4) throw PayloadError("bin entries must be [row, col, re, im]");
      m.kept.push_back({b[0].get<int>(), b[1].get<int>(), cplx{b[2].get<double>(), b[3].get<double>()}});
    }
    validate_bins(m);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw PayloadError(std::string("masked spectrum JSON: ") + e.what());
  }
}

std::vector<std::uint8_t> to_binary(const MaskedSpectrum& m) {
  std::vector<std::uint8_t> out(std::begin(kMaskMagic), std::end(kMaskMagic));
  put_u32(out, kMaskVersion);
  put_u32(out, static_cast<std::uint32_t>(m.rows));
  put_u32(out, static_cast<std::uint32_t>(m.cols));
  put_u32(out, static_cast<std::uint32_t>(m.kept.size()));
  put_f64(out, m.total_energy);
  for (const auto& b : m.kept) {
    put_u32(out, static_cast<std::uint32_t>(b.row));
    put_u32(out, static_cast<std::uint32_t>(b.col));
    put_f64(out, b.value.real());
    put_f64(out, b.value.imag());
  }
  return out;
}

MaskedSpectrum masked_spectrum_from_binary(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < sizeof kMaskMagic || std::memcmp(bytes.data(), kMaskMagic, sizeof kMaskMagic) != 0)
    throw PayloadError("not a masked spectrum record");
  Reader rd{bytes, sizeof kMaskMagic};
  if (rd.u32() != kMaskVersion) throw PayloadError("unsupported masked spectrum version");
  MaskedSpectrum m;
  m.rows = static_cast<int>(rd.u32());
  m.cols = static_cast<int>(rd.u32());
  const auto count = rd.u32();
  m.total_energy = rd.f64();
  rd.need(static_cast<std::size_t>(count) * 24);
  m.kept.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    SpectralBin b;
    b.row = static_cast<int>(rd.u32());
    b.col = static_cast<int>(rd.u32());
    const double re = rd.f64();
    const double im = rd.f64();
    b.value = {re, im};
    m.kept.push_back(b);
  }
  if (rd.pos != bytes.size()) throw PayloadError("trailing bytes after masked spectrum record");
  validate_bins(m);
  return m;
}

}  // namespace nfce
