#ifndef QAGREE_COMPATIBILITY_HPP
#define QAGREE_COMPATIBILITY_HPP

// Compatibility of two agents' assignments. The decision procedures reduce
// to support overlap (classical outcome sets, or the geometric intersection
// of operator supports); the verifiers check supplied witnesses against the
// objective (common data) and subjective (common test) definitions.

#include <string>
#include <variant>
#include <vector>

#include "qagree/linalg.hpp"
#include "qagree/regions.hpp"

namespace qagree {

inline constexpr double kDefaultWitnessTol = 1e-10;

class ProbabilityDistribution {
 public:
  // Outcome labels default to "0", "1", ...
  explicit ProbabilityDistribution(std::vector<double> probs, double tol = kDefaultSupportTol);
  ProbabilityDistribution(std::vector<std::string> outcomes, std::vector<double> probs,
                          double tol = kDefaultSupportTol);

  static ProbabilityDistribution uniform(std::size_t n);

  const std::vector<std::string>& outcomes() const noexcept { return outcomes_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_.at(i); }

 private:
  std::vector<std::string> outcomes_;
  std::vector<double> probs_;
};

// P(X = x | Y = y) stored with rows indexed by x and columns by y; every
// column is a distribution over X.
class ConditionalDistribution {
 public:
  explicit ConditionalDistribution(Eigen::MatrixXd table, double tol = kDefaultSupportTol);
  ConditionalDistribution(std::vector<std::string> given_outcomes,
                          std::vector<std::string> out_outcomes, Eigen::MatrixXd table,
                          double tol = kDefaultSupportTol);

  const std::vector<std::string>& given_outcomes() const noexcept { return given_; }
  const std::vector<std::string>& out_outcomes() const noexcept { return out_; }
  const Eigen::MatrixXd& table() const noexcept { return table_; }
  std::size_t given_count() const noexcept { return given_.size(); }
  std::size_t out_count() const noexcept { return out_.size(); }

 private:
  std::vector<std::string> given_;
  std::vector<std::string> out_;
  Eigen::MatrixXd table_;
};

// P(Y, X1, X2) laid out row-major in (y, x1, x2).
class TripleDistribution {
 public:
  TripleDistribution(std::size_t y_count, std::size_t x1_count, std::size_t x2_count,
                     std::vector<double> probs, double tol = kDefaultSupportTol);

  std::size_t y_count() const noexcept { return ny_; }
  std::size_t x1_count() const noexcept { return nx1_; }
  std::size_t x2_count() const noexcept { return nx2_; }
  double at(std::size_t y, std::size_t x1, std::size_t x2) const;

 private:
  std::size_t ny_;
  std::size_t nx1_;
  std::size_t nx2_;
  std::vector<double> probs_;
};

struct CompatibilityVerdict {
  bool compatible = false;
  // Shared outcome indices (classical) or the support intersection (quantum).
  std::variant<std::vector<std::size_t>, Subspace> intersection;
  std::string diagnostics;

  Eigen::Index intersection_rank() const;
};

// Compatible iff some outcome exceeds support_tol under both assignments.
CompatibilityVerdict classical_compatible(const ProbabilityDistribution& q1,
                                          const ProbabilityDistribution& q2,
                                          double support_tol = kDefaultSupportTol);

// Compatible iff supp(s1) ∩ supp(s2) has rank at least one.
CompatibilityVerdict quantum_compatible(const DensityOperator& s1, const DensityOperator& s2,
                                        double rank_tol = kDefaultRankTol);

// P_i(Y | X = x) ∝ P(X = x | Y) Q_i(Y). Throws kImpossibleEvent when the
// predictive probability of x is at most support_tol.
ProbabilityDistribution classical_posterior(const ConditionalDistribution& cond,
                                            const ProbabilityDistribution& prior, std::size_t x,
                                            double support_tol = kDefaultSupportTol);

// Objective witness: P(X1=x1, X2=x2) > tol and P(Y | Xi=xi) = qi within tol.
bool verify_objective_classical(const ProbabilityDistribution& q1,
                                const ProbabilityDistribution& q2,
                                const TripleDistribution& joint, std::size_t x1, std::size_t x2,
                                double tol = kDefaultWitnessTol);

// Subjective witness: every predictive probability is positive for both
// priors and the two Bayesian posteriors agree at x_tilde within tol.
bool verify_subjective_classical(const ProbabilityDistribution& q1,
                                 const ProbabilityDistribution& q2,
                                 const ConditionalDistribution& cond, std::size_t x_tilde,
                                 double tol = kDefaultWitnessTol);

// Objective witness over a hybrid state with classical registers (X1, X2)
// and the quantum region: the block weight at (x1, x2) is positive and the
// normalized conditional blocks ρ_{B|Xi=xi} equal si within tol (max-norm).
bool verify_objective_quantum(const DensityOperator& s1, const DensityOperator& s2,
                              const HybridState& hybrid, std::size_t x1, std::size_t x2,
                              double tol = kDefaultWitnessTol);

// Subjective witness: `likelihoods` is a measurement (effects summing to the
// identity, else kInvalidInput); all predictive probabilities are positive
// for both states and the quantum Bayes posteriors at x_tilde agree.
bool verify_subjective_quantum(const DensityOperator& s1, const DensityOperator& s2,
                               const std::vector<HermitianOperator>& likelihoods,
                               std::size_t x_tilde, double tol = kDefaultWitnessTol);

}  // namespace qagree

#endif  // QAGREE_COMPATIBILITY_HPP
