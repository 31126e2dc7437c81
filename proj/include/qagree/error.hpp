#ifndef QAGREE_ERROR_HPP
#define QAGREE_ERROR_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qagree {

// Failure categories. The first group describes malformed input (shapes,
// invariants of supplied objects); the second group describes well-formed
// input for which the requested quantity does not exist.
enum class ErrorCode {
  kDimensionMismatch,
  kInvalidInput,
  kNotHermitian,
  kNotPsd,
  kNotNormalized,
  kNotUnitary,
  kNotTracePreserving,
  kUnknownRegion,
  kMissingClassPair,

  kImpossibleEvent,
  kIncompatible,
  kPriorExcludesSupport,
  kNonHermitianProduct,
  kNegativePooledEigenvalue,
};

std::string_view to_string(ErrorCode code);

// True for errors that describe a domain outcome rather than bad input.
bool is_domain_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<double> residual = std::nullopt)
      : std::runtime_error(message), code_(code), residual_(residual) {}

  ErrorCode code() const noexcept { return code_; }
  // Numeric diagnostic attached to threshold failures (e.g. the Hermiticity
  // residual of a rejected pooling product).
  std::optional<double> residual() const noexcept { return residual_; }

 private:
  ErrorCode code_;
  std::optional<double> residual_;
};

}  // namespace qagree

#endif  // QAGREE_ERROR_HPP
