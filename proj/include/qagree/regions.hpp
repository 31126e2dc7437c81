#ifndef QAGREE_REGIONS_HPP
#define QAGREE_REGIONS_HPP

// Conditional-state calculus over labelled regions: joint states and their
// marginals, the star product, conditioning, hybrid classical-quantum states
// and the quantum Bayes rule.

#include <map>
#include <string>
#include <vector>

#include "qagree/linalg.hpp"

namespace qagree {

// Probabilities at or below this value are treated as zero.
inline constexpr double kDefaultSupportTol = 1e-12;

enum class RegionKind { kQuantum, kClassical };

// A classical region carries the computational basis as its preferred basis.
struct RegionLabel {
  std::string name;
  std::size_t dim = 1;
  RegionKind kind = RegionKind::kQuantum;

  friend bool operator==(const RegionLabel&, const RegionLabel&) = default;
};

// Operator on the tensor product of an ordered list of regions. The first
// region is the left tensor factor. The joint operator itself need not be
// PSD; its single-region marginals must be.
class JointState {
 public:
  JointState(std::vector<RegionLabel> regions, HermitianOperator op, bool normalized = true,
             double tol = kDefaultPsdTol);

  const std::vector<RegionLabel>& regions() const noexcept { return regions_; }
  const HermitianOperator& op() const noexcept { return op_; }
  bool normalized() const noexcept { return normalized_; }
  Dims dims() const;

  // Position of the named region; throws kUnknownRegion.
  std::size_t index_of(const std::string& name) const;
  // Sorted factor positions of the named regions.
  std::vector<std::size_t> factors_of(const std::vector<std::string>& names) const;

 private:
  std::vector<RegionLabel> regions_;
  HermitianOperator op_;
  bool normalized_;
};

// σ_{B|A}: an operator on the whole composite whose partial trace over the
// target regions is the support projector of the marginal on `given`. Not a
// density operator; its trace is the rank of that marginal.
struct ConditionalState {
  std::vector<RegionLabel> regions;
  std::vector<RegionLabel> target;
  std::vector<RegionLabel> given;
  HermitianOperator op;
};

// Describes where a smaller operator sits inside a composite: the factor
// dimensions of the composite and the (ascending) factors it acts on.
struct FactorEmbedding {
  Dims dims;
  std::vector<std::size_t> factors;
};

JointState marginalize(const JointState& s, const std::vector<std::string>& keep);

// (1 ⊗ Φ)^{1/2} Ψ (1 ⊗ Φ)^{1/2}, with Φ placed according to `at`.
HermitianOperator star_product(const HermitianOperator& psi, const HermitianOperator& phi,
                               const FactorEmbedding& at, double psd_tol = kDefaultPsdTol);
// Ψ ⋆ Φ for Φ acting on the same space as Ψ.
HermitianOperator star_product(const HermitianOperator& psi, const HermitianOperator& phi,
                               double psd_tol = kDefaultPsdTol);

// σ ⋆ σ_on^{-1} with the pseudo-inverse of the marginal embedded on the
// conditioning regions. Throws kImpossibleEvent if that marginal vanishes.
ConditionalState condition(const JointState& s, const std::vector<std::string>& on,
                           double rank_tol = kDefaultRankTol);

// A joint assignment of classical outcomes, one entry per classical register.
using Outcome = std::vector<std::size_t>;

enum class TraceMode {
  kRequireUnit,   // block traces must sum to 1
  kRescale,       // divide every block by the total trace
  kUnnormalized,  // keep as given, flagged as unnormalized
};

// Σ_x |x⟩⟨x| ⊗ σ_{X=x,B}. Blocks are stored densely: every outcome tuple
// has an entry, zero when it was not supplied.
class HybridState {
 public:
  const std::vector<RegionLabel>& classical_regions() const noexcept { return classical_; }
  const RegionLabel& quantum_region() const noexcept { return quantum_; }
  const std::map<Outcome, HermitianOperator>& blocks() const noexcept { return blocks_; }
  bool normalized() const noexcept { return normalized_; }

  // Throws kInvalidInput for an outcome tuple outside the registers.
  const HermitianOperator& block(const Outcome& x) const;

  JointState to_joint() const;
  // Inverse of to_joint. The first regions must be classical and the last
  // quantum; coherences between classical outcomes above tol are rejected.
  static HybridState from_joint(const JointState& s, double tol = 1e-10);

 private:
  friend HybridState make_hybrid(std::vector<RegionLabel>, RegionLabel,
                                 std::map<Outcome, ComplexMatrix>, TraceMode, double);

  std::vector<RegionLabel> classical_;
  RegionLabel quantum_;
  std::map<Outcome, HermitianOperator> blocks_;
  bool normalized_ = true;
};

HybridState make_hybrid(std::vector<RegionLabel> classical, RegionLabel quantum,
                        std::map<Outcome, ComplexMatrix> blocks,
                        TraceMode mode = TraceMode::kRequireUnit, double tol = kDefaultPsdTol);

// Single classical register "X" with one block per outcome, quantum region "B".
HybridState make_hybrid(const std::vector<ComplexMatrix>& blocks,
                        TraceMode mode = TraceMode::kRequireUnit, double tol = kDefaultPsdTol);

// (likelihood ⋆ prior) / Tr(likelihood · prior). Throws kImpossibleEvent when
// the predictive probability is at most support_tol.
DensityOperator quantum_bayes(const HermitianOperator& likelihood, const DensityOperator& prior,
                              double support_tol = kDefaultSupportTol,
                              double psd_tol = kDefaultPsdTol);

// Tr(likelihood · state), the predictive probability of an outcome.
double predictive_probability(const HermitianOperator& likelihood, const DensityOperator& state);

}  // namespace qagree

#endif  // QAGREE_REGIONS_HPP
