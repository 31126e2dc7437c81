#ifndef QAGREE_LINALG_HPP
#define QAGREE_LINALG_HPP

// Dense complex linear algebra for operators on finite-dimensional Hilbert
// spaces: tensor products, partial traces, and the spectral functions
// (support, square root, pseudo-inverse) used by the conditional-state layer.
//
// Composite spaces use the Kronecker convention: for factors with dimensions
// (d0, d1, ..., dk) the basis index is i0*d1*...*dk + ... + ik, i.e. the left
// (first) factor is the most significant digit.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace qagree {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultHermTol = 1e-10;
inline constexpr double kDefaultPsdTol = 1e-10;

// Largest absolute entry; 0 for an empty matrix.
double max_abs(const ComplexMatrix& m);

// ‖M − M†‖_max.
double hermiticity_residual(const ComplexMatrix& m);

// Throws kInvalidInput unless m is square, non-empty and finite.
void require_square_finite(const ComplexMatrix& m, std::string_view what);

class HermitianOperator {
 public:
  // Accepts m when ‖m − m†‖_max ≤ tol·max(1, ‖m‖_max) and stores (m + m†)/2.
  explicit HermitianOperator(const ComplexMatrix& m, double tol = kDefaultHermTol);

  // Forced symmetrization with no tolerance check. For results that are
  // Hermitian in exact arithmetic.
  static HermitianOperator symmetrized(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  double tol() const noexcept { return tol_; }
  double trace() const { return m_.trace().real(); }

 private:
  HermitianOperator() = default;

  ComplexMatrix m_;
  double tol_ = kDefaultHermTol;
};

// Eigenvalues ascending, eigenvectors as columns.
struct Spectrum {
  RealVector values;
  ComplexMatrix vectors;
};

Spectrum eigh(const HermitianOperator& h);

// Unit-trace positive semidefinite operator. Eigenvalues in [−tol, 0) are
// clamped to zero at construction.
class DensityOperator {
 public:
  explicit DensityOperator(const HermitianOperator& op, double tol = kDefaultPsdTol);
  explicit DensityOperator(const ComplexMatrix& m, double tol = kDefaultPsdTol);

  const HermitianOperator& op() const noexcept { return op_; }
  const ComplexMatrix& matrix() const noexcept { return op_.matrix(); }
  Eigen::Index dim() const noexcept { return op_.dim(); }

 private:
  HermitianOperator op_;
};

// Orthonormal basis (stored as columns) of a subspace of C^ambient_dim.
class Subspace {
 public:
  Subspace(Eigen::Index ambient_dim, ComplexMatrix basis, double tol = 1e-10);

  static Subspace empty(Eigen::Index ambient_dim);
  static Subspace full(Eigen::Index ambient_dim);

  Eigen::Index ambient_dim() const noexcept { return ambient_dim_; }
  Eigen::Index rank() const noexcept { return basis_.cols(); }
  bool is_empty() const noexcept { return rank() == 0; }
  const ComplexMatrix& basis() const noexcept { return basis_; }

  // Orthogonal projector onto the subspace.
  ComplexMatrix projector() const;

 private:
  Eigen::Index ambient_dim_;
  ComplexMatrix basis_;
};

// Kronecker product a ⊗ b.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// Traces out every factor not listed in `keep`. Kept factors appear in the
// result in their original relative order. Throws kDimensionMismatch when
// the product of dims differs from the size of m.
ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims,
                            const std::vector<std::size_t>& keep);

// Lifts `op`, acting on the listed factors (in ascending order), to the full
// composite by tensoring with the identity on all other factors.
ComplexMatrix embed(const ComplexMatrix& op, const Dims& dims,
                    const std::vector<std::size_t>& factors);

// Span of eigenvectors whose |eigenvalue| exceeds rank_tol·max|eigenvalue|.
// The zero operator has the empty support.
Subspace support(const HermitianOperator& h, double rank_tol = kDefaultRankTol);

// PSD square root by spectral decomposition. Throws kNotPsd for an
// eigenvalue below −psd_tol·max(1, max|eigenvalue|); milder negatives, and
// positives at rounding level (d·eps·max|eigenvalue|), are set to zero.
HermitianOperator sqrt_psd(const HermitianOperator& h, double psd_tol = kDefaultPsdTol);

// Moore–Penrose inverse: eigenvalues above the support threshold inverted,
// the rest zeroed.
HermitianOperator pseudo_inverse(const HermitianOperator& h,
                                 double rank_tol = kDefaultRankTol);

// Geometric intersection, read off as the eigenspace of P + Q for
// eigenvalues within rank_tol of 2.
Subspace intersect(const Subspace& p, const Subspace& q,
                   double rank_tol = kDefaultRankTol);

}  // namespace qagree

#endif  // QAGREE_LINALG_HPP
