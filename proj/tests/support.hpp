#ifndef QAGREE_TESTS_SUPPORT_HPP
#define QAGREE_TESTS_SUPPORT_HPP

// Test-only helpers: literal matrix builders, random generators for
// property tests, and brute-force oracles that do not go through the
// library's spectral code paths.

#include <cmath>
#include <complex>
#include <initializer_list>
#include <optional>
#include <random>
#include <vector>

#include "qagree/compatibility.hpp"
#include "qagree/error.hpp"
#include "qagree/linalg.hpp"
#include "qagree/random.hpp"

namespace qagree::testing {

using namespace std::complex_literals;

inline ComplexMatrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline ComplexMatrix diag(std::initializer_list<double> values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

inline ComplexMatrix diag(const std::vector<double>& values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v.cast<Complex>().asDiagonal();
}

inline ComplexMatrix ket_bra(const ComplexVector& a, const ComplexVector& b) {
  return a * b.adjoint();
}

inline ComplexVector ket(Eigen::Index dim, Eigen::Index i) {
  return ComplexVector::Unit(dim, i);
}

inline ComplexVector plus() {
  ComplexVector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return v;
}

inline ComplexMatrix identity(Eigen::Index dim) {
  return ComplexMatrix::Identity(dim, dim);
}

inline HermitianOperator herm(const ComplexMatrix& m) { return HermitianOperator(m); }
inline DensityOperator dens(const ComplexMatrix& m) { return DensityOperator(m); }

inline double dist(const ComplexMatrix& a, const ComplexMatrix& b) { return max_abs(a - b); }

// Random probability vector; with `zeros` some entries are forced to zero
// (at least one stays positive).
inline std::vector<double> random_simplex(std::size_t n, Rng& rng, bool zeros = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) {
    x = (zeros && u(rng) < 0.4) ? 0.0 : u(rng) + 1e-3;
    total += x;
  }
  if (total == 0.0) {
    p[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = 1.0;
    return p;
  }
  for (auto& x : p) x /= total;
  return p;
}

// Smallest eigenvalue via the characteristic-free route: Gershgorin-free
// brute force is impractical, so this uses Eigen's general complex solver
// (a different algorithm from the Hermitian one the library uses).
inline double min_real_eigenvalue(const ComplexMatrix& m) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m);
  return solver.eigenvalues().real().minCoeff();
}

// Dense Kronecker product by explicit index arithmetic.
inline ComplexMatrix kron_oracle(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
    }
  }
  return out;
}

// Tr_B of an operator on A ⊗ B by direct summation.
inline ComplexMatrix trace_second_oracle(const ComplexMatrix& m, Eigen::Index da, Eigen::Index db) {
  ComplexMatrix out = ComplexMatrix::Zero(da, da);
  for (Eigen::Index a = 0; a < da; ++a)
    for (Eigen::Index b = 0; b < da; ++b)
      for (Eigen::Index k = 0; k < db; ++k) out(a, b) += m(a * db + k, b * db + k);
  return out;
}

// Tr_A of an operator on A ⊗ B by direct summation.
inline ComplexMatrix trace_first_oracle(const ComplexMatrix& m, Eigen::Index da, Eigen::Index db) {
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Eigen::Index a = 0; a < db; ++a)
    for (Eigen::Index b = 0; b < db; ++b)
      for (Eigen::Index k = 0; k < da; ++k) out(a, b) += m(k * db + a, k * db + b);
  return out;
}

// Classical Bayes posterior P(y|x) ∝ L(x|y) Q(y) by the textbook formula.
inline std::vector<double> bayes_oracle(const std::vector<double>& likelihood_of_x,
                                        const std::vector<double>& prior) {
  std::vector<double> post(prior.size());
  double z = 0.0;
  for (std::size_t y = 0; y < prior.size(); ++y) z += likelihood_of_x[y] * prior[y];
  for (std::size_t y = 0; y < prior.size(); ++y) post[y] = likelihood_of_x[y] * prior[y] / z;
  return post;
}

// Code of the qagree::Error thrown by f, or nullopt when nothing is thrown.
template <class F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace qagree::testing

#endif  // QAGREE_TESTS_SUPPORT_HPP
