#pragma once

#include <vector>

#include "nfce/types.hpp"

namespace nfce {

/// Third-order quasi-memoryless LNA coefficients.
struct LnaParams {
  cplx a1{1.065, 0.0};
  cplx a2{-0.028, 0.0};

  static LnaParams ideal() { return {cplx{1.0, 0.0}, cplx{0.0, 0.0}}; }

  bool operator==(const LnaParams&) const = default;
};

/// Expected LNA input power E{|y|^2} = p beta + sigma^2 (the AGC normalizer).
double input_power(double power, double beta, double noise_var);

/// y_check = a1 y + a2 |y|^2 y / (p beta + sigma^2).
cplx lna_distort(cplx y, const LnaParams& lna, double signal_power, double noise_var);
Eigen::VectorXcd lna_distort(const Eigen::VectorXcd& y, const LnaParams& lna, double signal_power,
                             double noise_var);

/// Per-subarray variant; `per_subarray` must hold one LnaParams per block.
std::vector<Eigen::VectorXcd> lna_distort(const std::vector<Eigen::VectorXcd>& blocks,
                                          const std::vector<LnaParams>& per_subarray,
                                          double signal_power, double noise_var);

/// alpha = sqrt(p beta) (a1 + a2 p beta / (p beta + sigma^2)). Throws DegenerateHardwareError
/// when alpha vanishes.
cplx effective_gain(double power, double beta, double noise_var, const LnaParams& lna);

}  // namespace nfce
