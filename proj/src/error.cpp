#include "qagree/error.hpp"

namespace qagree {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kInvalidInput: return "invalid input";
    case ErrorCode::kNotHermitian: return "not Hermitian";
    case ErrorCode::kNotPsd: return "not PSD";
    case ErrorCode::kNotNormalized: return "not normalized";
    case ErrorCode::kNotUnitary: return "not unitary";
    case ErrorCode::kNotTracePreserving: return "not trace preserving";
    case ErrorCode::kUnknownRegion: return "unknown region";
    case ErrorCode::kMissingClassPair: return "missing class pair";
    case ErrorCode::kImpossibleEvent: return "conditioning on impossible event";
    case ErrorCode::kIncompatible: return "incompatible assignments";
    case ErrorCode::kPriorExcludesSupport: return "prior excludes jointly supported outcome";
    case ErrorCode::kNonHermitianProduct: return "non-Hermitian pooling product";
    case ErrorCode::kNegativePooledEigenvalue: return "negative pooled eigenvalue beyond tolerance";
  }
  return "unknown error";
}

bool is_domain_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kImpossibleEvent:
    case ErrorCode::kIncompatible:
    case ErrorCode::kPriorExcludesSupport:
    case ErrorCode::kNonHermitianProduct:
    case ErrorCode::kNegativePooledEigenvalue:
      return true;
    default:
      return false;
  }
}

}  // namespace qagree
