#ifndef QAGREE_POOLING_HPP
#define QAGREE_POOLING_HPP

// Pooling of two agents' posteriors against a shared prior,
//   classical:  Q_pooled(y) = c Q1(y) Q2(y) / P(y)
//   quantum:    σ_pooled    = c σ1 ρ⁻¹ σ2,
// together with the minimal-sufficient-statistic machinery whose
// conditional-independence condition licenses the formula.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qagree/compatibility.hpp"
#include "qagree/linalg.hpp"

namespace qagree {

struct PoolingOptions {
  double rank_tol = kDefaultRankTol;
  // Relative: ‖T − T†‖_max ≤ herm_tol·‖T‖_max for the product T = σ1 ρ⁻¹ σ2.
  double herm_tol = 1e-8;
  double psd_tol = kDefaultPsdTol;
  // ‖(1 − P_prior) σi‖_max bound for "supp σi ⊆ supp ρ".
  double containment_tol = 1e-8;
};

// Outcome of Q_pooled = c Q1 Q2 / P or σ_pooled = c σ1 ρ⁻¹ σ2.
template <class Pooled>
struct PoolingReport {
  Pooled pooled;
  double normalization_c = 1.0;
  double hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;
  bool precondition_checked = false;
  std::optional<double> precondition_residual;
};

using ClassicalPoolingReport = PoolingReport<ProbabilityDistribution>;
using QuantumPoolingReport = PoolingReport<DensityOperator>;

// Throws kIncompatible for disjoint posterior supports and
// kPriorExcludesSupport when a jointly supported outcome has zero prior.
ClassicalPoolingReport classical_pool(const ProbabilityDistribution& prior,
                                      const ProbabilityDistribution& q1,
                                      const ProbabilityDistribution& q2,
                                      double support_tol = kDefaultSupportTol);

// Result of comparing ρ_{s1 s2|B} against the product ρ_{s1|B} ρ_{s2|B}.
struct IndependenceCheck {
  bool independent = false;
  // max over class pairs of ‖joint(a,b) − h1(a)·h2(b)‖_max
  double residual = 0.0;
  // same with the factors swapped, h2(b)·h1(a)
  double reversed_residual = 0.0;
};

// Throws kIncompatible, kPriorExcludesSupport, kNonHermitianProduct (with
// the relative residual attached) or kNegativePooledEigenvalue. A supplied
// independence check is copied into the report's precondition fields.
QuantumPoolingReport quantum_pool(const DensityOperator& prior, const DensityOperator& s1,
                                  const DensityOperator& s2, const PoolingOptions& opts = {},
                                  const std::optional<IndependenceCheck>& precondition = {});

// Partition of data outcomes into likelihood-proportionality classes.
struct SufficientStatistic {
  std::vector<std::string> source_outcomes;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::string> warnings;

  // Index of the class containing outcome x.
  std::size_t class_of(std::size_t x) const;
};

inline constexpr double kDefaultProportionalityTol = 1e-9;

// x ~ x' iff the rows P(X=x|Y=·) and P(X=x'|Y=·) are proportional: both are
// normalized to unit sum and compared in max-norm. Classes are ordered by
// their smallest member.
SufficientStatistic minimal_sufficient_statistic(const ConditionalDistribution& cond,
                                                 double tol = kDefaultProportionalityTol);

// Operator analogue: x ~ x' iff ρ_{X=x|B} = λ ρ_{X=x'|B} for some λ > 0,
// decided after trace normalization. Zero operators share one class and
// produce a warning.
SufficientStatistic quantum_minimal_sufficient_statistic(
    const std::vector<HermitianOperator>& likelihoods, double tol = kDefaultProportionalityTol);

using ClassPair = std::pair<std::size_t, std::size_t>;

// Throws kMissingClassPair if `joint` lacks a pair from h1 × h2 (or holds a
// pair naming an unknown class).
IndependenceCheck check_conditional_independence(
    const std::map<std::size_t, ComplexMatrix>& h1, const std::map<std::size_t, ComplexMatrix>& h2,
    const std::map<ClassPair, ComplexMatrix>& joint, double tol = kDefaultWitnessTol);

// An agent's deterministic state assignment as a function of the prior.
using Assignment = std::function<DensityOperator(const DensityOperator&)>;
using PooledMap = std::function<QuantumPoolingReport(const DensityOperator&)>;

// ρ ↦ quantum_pool(ρ, assign1(ρ), assign2(ρ)). Not linear in ρ in general.
PooledMap pooled_map(Assignment assign1, Assignment assign2, PoolingOptions opts = {});

}  // namespace qagree

#endif  // QAGREE_POOLING_HPP
