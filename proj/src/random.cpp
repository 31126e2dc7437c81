#include "qagree/random.hpp"

#include <cmath>

#include "qagree/error.hpp"

namespace qagree {

ComplexMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(rows, cols);
  // Fill row by row so the draw order is independent of Eigen's storage order.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng) {
  const ComplexMatrix g = random_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    q.col(k) *= mag > 0.0 ? d / mag : Complex(1.0);
  }
  return q;
}

DensityOperator random_density(Eigen::Index dim, Rng& rng, Eigen::Index rank) {
  if (dim < 1) throw Error(ErrorCode::kInvalidInput, "random_density: dim must be positive");
  const Eigen::Index r = rank <= 0 ? dim : rank;
  const ComplexMatrix g = random_gaussian(dim, r, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityOperator(HermitianOperator::symmetrized(m));
}

HermitianOperator random_hermitian(Eigen::Index dim, Rng& rng) {
  return HermitianOperator::symmetrized(random_gaussian(dim, dim, rng));
}

DensityOperator random_diagonal_density(Eigen::Index dim, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.05, 1.0);
  RealVector p(dim);
  for (Eigen::Index i = 0; i < dim; ++i) p(i) = uniform(rng);
  p /= p.sum();
  return DensityOperator(HermitianOperator::symmetrized(p.cast<Complex>().asDiagonal()));
}

std::vector<HermitianOperator> random_povm(Eigen::Index dim, std::size_t outcomes, Rng& rng) {
  if (outcomes == 0) throw Error(ErrorCode::kInvalidInput, "random_povm: need outcomes");
  std::vector<ComplexMatrix> raw;
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < outcomes; ++k) {
    const ComplexMatrix g = random_gaussian(dim, dim, rng);
    raw.push_back(g * g.adjoint());
    total += raw.back();
  }
  const HermitianOperator inv_root =
      pseudo_inverse(sqrt_psd(HermitianOperator::symmetrized(total)));
  std::vector<HermitianOperator> effects;
  for (const auto& a : raw) {
    effects.push_back(
        HermitianOperator::symmetrized(inv_root.matrix() * a * inv_root.matrix()));
  }
  return effects;
}

}  // namespace qagree
