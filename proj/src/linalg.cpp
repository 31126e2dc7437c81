#include "qagree/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qagree/error.hpp"

namespace qagree {

namespace {

// Maps (kept multi-index, traced multi-index) pairs to full composite
// indices: full_index[kept * traced_total + traced].
struct FactorSplit {
  std::size_t kept_total = 1;
  std::size_t traced_total = 1;
  std::vector<Eigen::Index> full_index;
};

FactorSplit split_factors(const Dims& dims, const std::vector<bool>& kept) {
  FactorSplit split;
  for (std::size_t f = 0; f < dims.size(); ++f) {
    (kept[f] ? split.kept_total : split.traced_total) *= dims[f];
  }
  const std::size_t total = split.kept_total * split.traced_total;
  split.full_index.resize(total);

  std::vector<std::size_t> digit(dims.size(), 0);
  for (std::size_t full = 0; full < total; ++full) {
    std::size_t k = 0;
    std::size_t t = 0;
    for (std::size_t f = 0; f < dims.size(); ++f) {
      if (kept[f]) {
        k = k * dims[f] + digit[f];
      } else {
        t = t * dims[f] + digit[f];
      }
    }
    split.full_index[k * split.traced_total + t] = static_cast<Eigen::Index>(full);
    // Odometer increment, last factor fastest.
    for (std::size_t f = dims.size(); f-- > 0;) {
      if (++digit[f] < dims[f]) break;
      digit[f] = 0;
    }
  }
  return split;
}

std::size_t product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

void check_layout(Eigen::Index size, const Dims& dims, std::string_view what) {
  if (dims.empty() || std::find(dims.begin(), dims.end(), 0u) != dims.end()) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + ": factor dimensions must be positive");
  }
  if (product(dims) != static_cast<std::size_t>(size)) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": product of factor dimensions (" +
                    std::to_string(product(dims)) + ") does not match operator dimension (" +
                    std::to_string(size) + ")");
  }
}

std::vector<bool> factor_mask(const Dims& dims, const std::vector<std::size_t>& factors,
                              std::string_view what) {
  std::vector<bool> mask(dims.size(), false);
  for (std::size_t f : factors) {
    if (f >= dims.size()) {
      throw Error(ErrorCode::kInvalidInput,
                  std::string(what) + ": factor index " + std::to_string(f) + " out of range");
    }
    if (mask[f]) {
      throw Error(ErrorCode::kInvalidInput,
                  std::string(what) + ": factor index " + std::to_string(f) + " repeated");
    }
    mask[f] = true;
  }
  return mask;
}

double spectral_scale(const RealVector& values) {
  return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
}

ComplexMatrix from_spectrum(const ComplexMatrix& vectors, const RealVector& values) {
  return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

}  // namespace

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

void require_square_finite(const ComplexMatrix& m, std::string_view what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + ": expected a non-empty square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, std::string(what) + ": non-finite entry");
  }
}

// HermitianOperator ----------------------------------------------------------

HermitianOperator::HermitianOperator(const ComplexMatrix& m, double tol) : tol_(tol) {
  require_square_finite(m, "Hermitian operator");
  const double residual = hermiticity_residual(m);
  if (residual > tol * std::max(1.0, max_abs(m))) {
    throw Error(ErrorCode::kNotHermitian,
                "operator is not Hermitian (residual " + std::to_string(residual) + ")",
                residual);
  }
  m_ = (m + m.adjoint()) / 2.0;
}

HermitianOperator HermitianOperator::symmetrized(const ComplexMatrix& m) {
  require_square_finite(m, "Hermitian operator");
  HermitianOperator h;
  h.m_ = (m + m.adjoint()) / 2.0;
  return h;
}

Spectrum eigh(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// DensityOperator ------------------------------------------------------------

DensityOperator::DensityOperator(const ComplexMatrix& m, double tol)
    : DensityOperator(HermitianOperator(m, tol), tol) {}

DensityOperator::DensityOperator(const HermitianOperator& op, double tol) : op_(op) {
  const double trace = op_.trace();
  if (std::abs(trace - 1.0) > tol) {
    throw Error(ErrorCode::kNotNormalized,
                "density operator trace " + std::to_string(trace) + " differs from 1",
                std::abs(trace - 1.0));
  }
  Spectrum spec = eigh(op_);
  const double min_eigenvalue = spec.values.minCoeff();
  if (min_eigenvalue < -tol) {
    throw Error(ErrorCode::kNotPsd,
                "density operator has eigenvalue " + std::to_string(min_eigenvalue),
                min_eigenvalue);
  }
  if (min_eigenvalue < 0.0) {
    op_ = HermitianOperator::symmetrized(
        from_spectrum(spec.vectors, spec.values.cwiseMax(0.0)));
  }
}

// Subspace -------------------------------------------------------------------

Subspace::Subspace(Eigen::Index ambient_dim, ComplexMatrix basis, double tol)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
  if (ambient_dim_ <= 0) {
    throw Error(ErrorCode::kInvalidInput, "subspace ambient dimension must be positive");
  }
  if (basis_.cols() == 0) {
    basis_.resize(ambient_dim_, 0);
    return;
  }
  if (basis_.rows() != ambient_dim_ || basis_.cols() > ambient_dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "subspace basis shape does not fit ambient space");
  }
  const ComplexMatrix gram = basis_.adjoint() * basis_;
  const double defect =
      max_abs(gram - ComplexMatrix::Identity(basis_.cols(), basis_.cols()));
  if (defect > tol) {
    throw Error(ErrorCode::kInvalidInput, "subspace basis is not orthonormal", defect);
  }
}

Subspace Subspace::empty(Eigen::Index ambient_dim) {
  return Subspace(ambient_dim, ComplexMatrix(ambient_dim, 0));
}

Subspace Subspace::full(Eigen::Index ambient_dim) {
  return Subspace(ambient_dim, ComplexMatrix::Identity(ambient_dim, ambient_dim));
}

ComplexMatrix Subspace::projector() const {
  return basis_ * basis_.adjoint();
}

// Tensor structure -----------------------------------------------------------

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims,
                            const std::vector<std::size_t>& keep) {
  require_square_finite(m, "partial_trace");
  check_layout(m.rows(), dims, "partial_trace");
  const FactorSplit split = split_factors(dims, factor_mask(dims, keep, "partial_trace"));

  const auto kept = static_cast<Eigen::Index>(split.kept_total);
  ComplexMatrix out = ComplexMatrix::Zero(kept, kept);
  for (std::size_t a = 0; a < split.kept_total; ++a) {
    for (std::size_t b = 0; b < split.kept_total; ++b) {
      Complex sum = 0.0;
      for (std::size_t t = 0; t < split.traced_total; ++t) {
        sum += m(split.full_index[a * split.traced_total + t],
                 split.full_index[b * split.traced_total + t]);
      }
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = sum;
    }
  }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, const Dims& dims,
                    const std::vector<std::size_t>& factors) {
  if (!std::is_sorted(factors.begin(), factors.end())) {
    throw Error(ErrorCode::kInvalidInput, "embed: factor indices must be ascending");
  }
  const std::vector<bool> mask = factor_mask(dims, factors, "embed");
  std::size_t op_dim = 1;
  for (std::size_t f : factors) op_dim *= dims[f];
  if (op.rows() != op.cols() || static_cast<std::size_t>(op.rows()) != op_dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embed: operator dimension " + std::to_string(op.rows()) +
                    " does not match the selected factors (" + std::to_string(op_dim) + ")");
  }
  const FactorSplit split = split_factors(dims, mask);
  const auto total = static_cast<Eigen::Index>(product(dims));
  ComplexMatrix out = ComplexMatrix::Zero(total, total);
  for (std::size_t a = 0; a < split.kept_total; ++a) {
    for (std::size_t b = 0; b < split.kept_total; ++b) {
      const Complex value = op(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (value == Complex(0.0)) continue;
      for (std::size_t t = 0; t < split.traced_total; ++t) {
        out(split.full_index[a * split.traced_total + t],
            split.full_index[b * split.traced_total + t]) = value;
      }
    }
  }
  return out;
}

// Spectral functions ---------------------------------------------------------

Subspace support(const HermitianOperator& h, double rank_tol) {
  const Spectrum spec = eigh(h);
  const double scale = spectral_scale(spec.values);
  if (scale == 0.0) return Subspace::empty(h.dim());

  const double threshold = rank_tol * scale;
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
    if (std::abs(spec.values(i)) > threshold) cols.push_back(i);
  }
  ComplexMatrix basis(h.dim(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    basis.col(static_cast<Eigen::Index>(c)) = spec.vectors.col(cols[c]);
  }
  return Subspace(h.dim(), std::move(basis));
}

HermitianOperator sqrt_psd(const HermitianOperator& h, double psd_tol) {
  const Spectrum spec = eigh(h);
  const double floor = -psd_tol * std::max(1.0, spectral_scale(spec.values));
  const double min_eigenvalue = spec.values.minCoeff();
  if (min_eigenvalue < floor) {
    throw Error(ErrorCode::kNotPsd,
                "square root of an operator with eigenvalue " + std::to_string(min_eigenvalue),
                min_eigenvalue);
  }
  // Eigenvalues at rounding level would otherwise turn into roots of order
  // sqrt(eps).
  const double noise = static_cast<double>(spec.values.size()) *
                       std::numeric_limits<double>::epsilon() * spectral_scale(spec.values);
  const RealVector clamped = spec.values.unaryExpr([noise](double v) { return v > noise ? v : 0.0; });
  return HermitianOperator::symmetrized(from_spectrum(spec.vectors, clamped.cwiseSqrt()));
}

HermitianOperator pseudo_inverse(const HermitianOperator& h, double rank_tol) {
  const Spectrum spec = eigh(h);
  const double threshold = rank_tol * spectral_scale(spec.values);
  RealVector inverted(spec.values.size());
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
    const double v = spec.values(i);
    inverted(i) = (v != 0.0 && std::abs(v) > threshold) ? 1.0 / v : 0.0;
  }
  return HermitianOperator::symmetrized(from_spectrum(spec.vectors, inverted));
}

Subspace intersect(const Subspace& p, const Subspace& q, double rank_tol) {
  if (p.ambient_dim() != q.ambient_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "subspace intersection: ambient dimensions " + std::to_string(p.ambient_dim()) +
                    " and " + std::to_string(q.ambient_dim()) + " differ");
  }
  if (p.is_empty() || q.is_empty()) return Subspace::empty(p.ambient_dim());

  const Spectrum spec =
      eigh(HermitianOperator::symmetrized(p.projector() + q.projector()));
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
    if (spec.values(i) >= 2.0 - rank_tol) cols.push_back(i);
  }
  ComplexMatrix basis(p.ambient_dim(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    basis.col(static_cast<Eigen::Index>(c)) = spec.vectors.col(cols[c]);
  }
  return Subspace(p.ambient_dim(), std::move(basis));
}

}  // namespace qagree
