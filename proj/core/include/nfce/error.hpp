#pragma once

#include <stdexcept>
#include <string>

namespace nfce {

/// Argument outside the documented domain of an operation (bad index, size mismatch, r <= 0, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Effective LNA gain is zero, so the observation cannot be normalized.
class DegenerateHardwareError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Experiment configuration is internally inconsistent (e.g. empty placement interval).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigendecomposition or other numerical routine failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Serialized payload (masked spectrum, basis cache) is malformed.
class PayloadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw DomainError(what);
}

}  // namespace detail
}  // namespace nfce
