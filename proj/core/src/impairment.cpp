#include "nfce/impairment.hpp"

#include <cmath>

#include "nfce/error.hpp"

namespace nfce {

double input_power(double power, double beta, double noise_var) {
  return power * beta + noise_var;
}

cplx lna_distort(cplx y, const LnaParams& lna, double signal_power, double noise_var) {
  const double agc = signal_power + noise_var;
  if (!(agc > 0.0)) throw DomainError("LNA normalizer p*beta + sigma^2 must be positive");
  return lna.a1 * y + (lna.a2 / agc) * std::norm(y) * y;
}

Eigen::VectorXcd lna_distort(const Eigen::VectorXcd& y, const LnaParams& lna, double signal_power,
                             double noise_var) {
  const double agc = signal_power + noise_var;
  if (!(agc > 0.0)) throw DomainError("LNA normalizer p*beta + sigma^2 must be positive");
  Eigen::VectorXcd out(y.size());
  for (Eigen::Index k = 0; k < y.size(); ++k)
    out(k) = lna.a1 * y(k) + (lna.a2 / agc) * std::norm(y(k)) * y(k);
  return out;
}

std::vector<Eigen::VectorXcd> lna_distort(const std::vector<Eigen::VectorXcd>& blocks,
                                          const std::vector<LnaParams>& per_subarray,
                                          double signal_power, double noise_var) {
  if (blocks.size() != per_subarray.size())
    throw DomainError("need one LnaParams per subarray block");
  std::vector<Eigen::VectorXcd> out;
  out.reserve(blocks.size());
  for (std::size_t l = 0; l < blocks.size(); ++l)
    out.push_back(lna_distort(blocks[l], per_subarray[l], signal_power, noise_var));
  return out;
}

cplx effective_gain(double power, double beta, double noise_var, const LnaParams& lna) {
  const double pb = power * beta;
  const double agc = pb + noise_var;
  if (!(agc > 0.0)) throw DomainError("LNA normalizer p*beta + sigma^2 must be positive");
  const cplx alpha = std::sqrt(pb) * (lna.a1 + lna.a2 * (pb / agc));
  if (alpha == cplx{0.0, 0.0}) throw DegenerateHardwareError("effective LNA gain alpha is zero");
  return alpha;
}

}  // namespace nfce
