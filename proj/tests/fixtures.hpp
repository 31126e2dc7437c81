#ifndef QAGREE_TESTS_FIXTURES_HPP
#define QAGREE_TESTS_FIXTURES_HPP

// Frozen regression values.

#include "support.hpp"

namespace qagree::testing {

// Nonlinearity witness for ρ ↦ c σ(ρ) ρ⁻¹ σ(ρ) with σ = half-strength qubit
// dephasing for both agents. Found by a seeded search over two-decimal
// qubit states and α ∈ {0.1, ..., 0.9}, then frozen.
struct NonlinearityWitness {
  ComplexMatrix rho;
  ComplexMatrix rho_prime;
  double alpha;
  double dephasing;
  // max-norm of Γ̃(αρ + (1−α)ρ′) − (αΓ̃(ρ) + (1−α)Γ̃(ρ′)) at freeze time
  double difference;
  ComplexMatrix pooled_mixture;
};

inline NonlinearityWitness nonlinearity_witness() {
  return {mat({{0.47, {0.36, 0.33}}, {{0.36, -0.33}, 0.53}}),
          mat({{0.64, {-0.22, -0.23}}, {{-0.22, 0.23}, 0.36}}),
          0.8,
          0.5,
          0.26969768139368844,
          mat({{0.504, {-0.038486053898602844, -0.034385080942194286}},
               {{-0.038486053898602844, 0.034385080942194286}, 0.49600000000000005}})};
}

// Qubit pipeline fixture: prior ρ, Wanda = [depolarizing 0.2],
// Theo = [Hadamard, dephasing 0.5]. Posteriors worked out by hand:
//   σ¹ = 0.8 ρ + 0.1 I
//   σ² = H ρ H with off-diagonals halved.
inline ComplexMatrix fixture_prior() {
  return mat({{0.7, {0.2, -0.1}}, {{0.2, 0.1}, 0.3}});
}

inline ComplexMatrix fixture_wanda_posterior() {
  return mat({{0.66, {0.16, -0.08}}, {{0.16, 0.08}, 0.34}});
}

inline ComplexMatrix fixture_theo_posterior() {
  return mat({{0.7, {0.1, 0.05}}, {{0.1, -0.05}, 0.3}});
}

inline ComplexMatrix hadamard() {
  return mat({{1.0, 1.0}, {1.0, -1.0}}) / std::sqrt(2.0);
}

}  // namespace qagree::testing

#endif  // QAGREE_TESTS_FIXTURES_HPP
