#ifndef QAGREE_RANDOM_HPP
#define QAGREE_RANDOM_HPP

// Seeded generators for random operators. All draws go through a caller
// supplied engine, so equal seeds reproduce identical matrices.

#include <random>
#include <vector>

#include "qagree/linalg.hpp"

namespace qagree {

using Rng = std::mt19937_64;

// Entries i.i.d. standard complex Gaussian (real and imaginary parts N(0, 1/2)).
ComplexMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

// Haar-distributed unitary: QR of a Gaussian matrix with the phases of R's
// diagonal absorbed into Q.
ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng);

// G G† / Tr(G G†) with G a dim×rank Gaussian matrix. rank = 0 means full rank.
DensityOperator random_density(Eigen::Index dim, Rng& rng, Eigen::Index rank = 0);

// Random Hermitian matrix with Gaussian entries (not normalized).
HermitianOperator random_hermitian(Eigen::Index dim, Rng& rng);

// Random diagonal density operator with a full-rank spectrum.
DensityOperator random_diagonal_density(Eigen::Index dim, Rng& rng);

// Measurement with `outcomes` PSD effects summing to the identity, built as
// S^{-1/2} A_k S^{-1/2} from random PSD A_k with S = Σ A_k.
std::vector<HermitianOperator> random_povm(Eigen::Index dim, std::size_t outcomes, Rng& rng);

}  // namespace qagree

#endif  // QAGREE_RANDOM_HPP
