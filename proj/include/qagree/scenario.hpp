#ifndef QAGREE_SCENARIO_HPP
#define QAGREE_SCENARIO_HPP

// Two-agent coarse-graining simulation. Both agents start from a shared
// prior and push it through their own pipeline of unitaries and
// (possibly defective) detector channels; the resulting assignments are
// tested for compatibility and, when compatible, pooled against the prior.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qagree/compatibility.hpp"
#include "qagree/error.hpp"
#include "qagree/linalg.hpp"
#include "qagree/pooling.hpp"

namespace qagree {

// Σ K ρ K† with Σ K†K = I on the input space. Kraus operators are
// output_dim × input_dim.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> ops, double tol = 1e-10);

  const std::vector<ComplexMatrix>& ops() const noexcept { return ops_; }
  Eigen::Index input_dim() const noexcept { return ops_.front().cols(); }
  Eigen::Index output_dim() const noexcept { return ops_.front().rows(); }

 private:
  std::vector<ComplexMatrix> ops_;
};

class UnitaryDynamics {
 public:
  explicit UnitaryDynamics(ComplexMatrix u, double tol = 1e-10);

  const ComplexMatrix& matrix() const noexcept { return u_; }
  Eigen::Index dim() const noexcept { return u_.rows(); }

 private:
  ComplexMatrix u_;
};

using PipelineStep = std::variant<UnitaryDynamics, KrausChannel>;

struct AgentPipeline {
  std::string name;
  std::vector<PipelineStep> steps;
};

struct ScenarioConfig {
  DensityOperator prior;
  std::array<AgentPipeline, 2> pipelines;
  // Maps the prior to the state used in the pooling formula. Absent means
  // the prior itself; e.g. a single unitary step pools against the evolved
  // prior, a partial-trace channel against the coarse-grained one.
  std::optional<AgentPipeline> reference;
  PoolingOptions tolerances;
  std::uint64_t seed = 0;
};

struct PoolingFailure {
  ErrorCode code;
  std::string message;
  std::optional<double> residual;
};

struct ScenarioResult {
  DensityOperator sigma1;
  DensityOperator sigma2;
  CompatibilityVerdict verdict;
  // At most one of these is set, and only when verdict.compatible.
  std::optional<QuantumPoolingReport> pooling;
  std::optional<PoolingFailure> pooling_error;

  // Relative Hermiticity residual of σ1 ρ⁻¹ σ2 when the product was formed.
  std::optional<double> hermiticity_residual() const;
};

DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho,
                              double psd_tol = kDefaultPsdTol);
DensityOperator evolve(const UnitaryDynamics& u, const DensityOperator& rho);
// Steps are applied left to right.
DensityOperator run_pipeline(const AgentPipeline& p, const DensityOperator& prior,
                             double psd_tol = kDefaultPsdTol);

// Output dimension of a pipeline fed with input_dim; throws
// kDimensionMismatch when adjacent steps do not chain.
Eigen::Index pipeline_output_dim(const AgentPipeline& p, Eigen::Index input_dim);

// Throws for pipelines that do not chain or end on different dimensions.
void validate(const ScenarioConfig& cfg);

// Incompatibility and pooling failures are reported in the result; only
// malformed configurations throw.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

// Channel constructors ---------------------------------------------------------

KrausChannel identity_channel(Eigen::Index dim);
// (1 − p) ρ + p I/d
KrausChannel depolarizing_mixture(Eigen::Index dim, double p);
// (1 − p) ρ + p Σ_i |i⟩⟨i| ρ |i⟩⟨i|
KrausChannel dephasing_mixture(Eigen::Index dim, double p);
// ρ ↦ |ψ⟩⟨ψ| for a unit vector ψ.
KrausChannel replacement_channel(const ComplexVector& psi);
// ρ_AB ↦ Tr_A ρ_AB with Kraus operators ⟨i|_A ⊗ 1_B.
KrausChannel partial_trace_channel(Eigen::Index dim_a, Eigen::Index dim_b);

// Random instances -------------------------------------------------------------

enum class InstanceKind {
  kRandom,      // Wanda: [depolarizing detector, U]; Theo: [U, dephasing detector]
  kOrthogonal,  // both apply U, then prepare orthogonal pure states
  kIdentical,   // both run the same [U, depolarizing detector]
};

std::string_view to_string(InstanceKind kind);
InstanceKind instance_kind_from_string(std::string_view name);

// Reproducible configuration: full-rank prior G G†/Tr from a seeded complex
// Gaussian G, Haar unitary U, detector channels mixing the identity with
// depolarizing/dephasing noise of weight noise_strength. With zero noise the
// detector steps are omitted. Same arguments give bit-identical configs.
ScenarioConfig random_instance(std::size_t dim, std::uint64_t seed, double noise_strength,
                               InstanceKind kind = InstanceKind::kRandom);

struct BatchCell {
  std::size_t dim = 0;
  double noise = 0.0;
  std::size_t count = 0;
  double compatible_fraction = 0.0;
  double hermitian_fraction = 0.0;
  double pooled_fraction = 0.0;
  // Mean over instances where the pooling product was formed.
  std::optional<double> mean_hermiticity_residual;
};

struct BatchReport {
  std::uint64_t seed = 0;
  InstanceKind kind = InstanceKind::kRandom;
  std::vector<BatchCell> cells;
};

// Instance seeds are derived from (seed, dim, noise index, instance index),
// so the report does not depend on `threads`.
BatchReport batch_report(const std::vector<std::size_t>& dims, std::size_t count,
                         const std::vector<double>& noise_grid, std::uint64_t seed,
                         InstanceKind kind = InstanceKind::kRandom, unsigned threads = 1);

}  // namespace qagree

#endif  // QAGREE_SCENARIO_HPP
