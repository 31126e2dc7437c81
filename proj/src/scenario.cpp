#include "qagree/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "qagree/random.hpp"

namespace qagree {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t p : parts) h = splitmix64(h ^ p);
  return h;
}

void check_noise(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "noise strength must lie in [0, 1]");
  }
}

ComplexMatrix basis_ket_bra(Eigen::Index dim, Eigen::Index i, Eigen::Index j) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(i, j) = 1.0;
  return m;
}

}  // namespace

// Channels and dynamics ------------------------------------------------------

KrausChannel::KrausChannel(std::vector<ComplexMatrix> ops, double tol) : ops_(std::move(ops)) {
  if (ops_.empty()) throw Error(ErrorCode::kInvalidInput, "channel needs a Kraus operator");
  const Eigen::Index rows = ops_.front().rows();
  const Eigen::Index cols = ops_.front().cols();
  if (rows == 0 || cols == 0) throw Error(ErrorCode::kInvalidInput, "empty Kraus operator");
  ComplexMatrix completeness = ComplexMatrix::Zero(cols, cols);
  for (const auto& k : ops_) {
    if (k.rows() != rows || k.cols() != cols) {
      throw Error(ErrorCode::kDimensionMismatch, "Kraus operators differ in shape");
    }
    if (!k.allFinite()) throw Error(ErrorCode::kInvalidInput, "non-finite Kraus entry");
    completeness += k.adjoint() * k;
  }
  const double defect = max_abs(completeness - ComplexMatrix::Identity(cols, cols));
  if (defect > tol) {
    throw Error(ErrorCode::kNotTracePreserving,
                "Kraus operators violate completeness by " + std::to_string(defect), defect);
  }
}

UnitaryDynamics::UnitaryDynamics(ComplexMatrix u, double tol) : u_(std::move(u)) {
  require_square_finite(u_, "unitary");
  const double defect = max_abs(u_.adjoint() * u_ - ComplexMatrix::Identity(u_.rows(), u_.rows()));
  if (defect > tol) {
    throw Error(ErrorCode::kNotUnitary, "matrix is not unitary (defect " +
                                            std::to_string(defect) + ")",
                defect);
  }
}

DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho,
                              double psd_tol) {
  if (ch.input_dim() != rho.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "channel input dimension " + std::to_string(ch.input_dim()) +
                    " differs from state dimension " + std::to_string(rho.dim()));
  }
  ComplexMatrix out = ComplexMatrix::Zero(ch.output_dim(), ch.output_dim());
  for (const auto& k : ch.ops()) out += k * rho.matrix() * k.adjoint();
  return DensityOperator(HermitianOperator::symmetrized(out), psd_tol);
}

DensityOperator evolve(const UnitaryDynamics& u, const DensityOperator& rho) {
  if (u.dim() != rho.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "unitary and state dimensions differ");
  }
  return DensityOperator(
      HermitianOperator::symmetrized(u.matrix() * rho.matrix() * u.matrix().adjoint()));
}

DensityOperator run_pipeline(const AgentPipeline& p, const DensityOperator& prior,
                             double psd_tol) {
  DensityOperator state = prior;
  for (const auto& step : p.steps) {
    state = std::visit(
        [&](const auto& s) -> DensityOperator {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, UnitaryDynamics>) {
            return evolve(s, state);
          } else {
            return apply_channel(s, state, psd_tol);
          }
        },
        step);
  }
  return state;
}

Eigen::Index pipeline_output_dim(const AgentPipeline& p, Eigen::Index input_dim) {
  Eigen::Index dim = input_dim;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto [in, out] = std::visit(
        [](const auto& s) -> std::pair<Eigen::Index, Eigen::Index> {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, UnitaryDynamics>) {
            return {s.dim(), s.dim()};
          } else {
            return {s.input_dim(), s.output_dim()};
          }
        },
        p.steps[i]);
    if (in != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "pipeline '" + p.name + "' step " + std::to_string(i) + " expects dimension " +
                      std::to_string(in) + " but receives " + std::to_string(dim));
    }
    dim = out;
  }
  return dim;
}

void validate(const ScenarioConfig& cfg) {
  const Eigen::Index d1 = pipeline_output_dim(cfg.pipelines[0], cfg.prior.dim());
  const Eigen::Index d2 = pipeline_output_dim(cfg.pipelines[1], cfg.prior.dim());
  const Eigen::Index dr =
      cfg.reference ? pipeline_output_dim(*cfg.reference, cfg.prior.dim()) : cfg.prior.dim();
  if (d1 != d2 || d1 != dr) {
    throw Error(ErrorCode::kDimensionMismatch,
                "pipelines end on dimensions " + std::to_string(d1) + " and " +
                    std::to_string(d2) + " but the pooling reference has dimension " +
                    std::to_string(dr));
  }
}

std::optional<double> ScenarioResult::hermiticity_residual() const {
  if (pooling) return pooling->hermiticity_residual;
  if (pooling_error && pooling_error->code == ErrorCode::kNonHermitianProduct) {
    return pooling_error->residual;
  }
  return std::nullopt;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  const double psd_tol = cfg.tolerances.psd_tol;
  ScenarioResult result{run_pipeline(cfg.pipelines[0], cfg.prior, psd_tol),
                        run_pipeline(cfg.pipelines[1], cfg.prior, psd_tol),
                        {},
                        std::nullopt,
                        std::nullopt};
  result.verdict = quantum_compatible(result.sigma1, result.sigma2, cfg.tolerances.rank_tol);
  if (!result.verdict.compatible) return result;

  const DensityOperator reference =
      cfg.reference ? run_pipeline(*cfg.reference, cfg.prior, psd_tol) : cfg.prior;
  try {
    result.pooling = quantum_pool(reference, result.sigma1, result.sigma2, cfg.tolerances);
  } catch (const Error& e) {
    result.pooling_error = PoolingFailure{e.code(), e.what(), e.residual()};
  }
  return result;
}

// Channel constructors -------------------------------------------------------

KrausChannel identity_channel(Eigen::Index dim) {
  return KrausChannel({ComplexMatrix::Identity(dim, dim)});
}

KrausChannel depolarizing_mixture(Eigen::Index dim, double p) {
  check_noise(p);
  std::vector<ComplexMatrix> ops{std::sqrt(1.0 - p) * ComplexMatrix::Identity(dim, dim)};
  if (p > 0.0) {
    const double w = std::sqrt(p / static_cast<double>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) ops.push_back(w * basis_ket_bra(dim, i, j));
    }
  }
  return KrausChannel(std::move(ops));
}

KrausChannel dephasing_mixture(Eigen::Index dim, double p) {
  check_noise(p);
  std::vector<ComplexMatrix> ops{std::sqrt(1.0 - p) * ComplexMatrix::Identity(dim, dim)};
  if (p > 0.0) {
    for (Eigen::Index i = 0; i < dim; ++i) ops.push_back(std::sqrt(p) * basis_ket_bra(dim, i, i));
  }
  return KrausChannel(std::move(ops));
}

KrausChannel replacement_channel(const ComplexVector& psi) {
  const Eigen::Index dim = psi.size();
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index i = 0; i < dim; ++i) {
    ops.push_back(psi * ComplexVector::Unit(dim, i).adjoint());
  }
  return KrausChannel(std::move(ops));
}

KrausChannel partial_trace_channel(Eigen::Index dim_a, Eigen::Index dim_b) {
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index i = 0; i < dim_a; ++i) {
    ComplexMatrix bra = ComplexMatrix::Zero(1, dim_a);
    bra(0, i) = 1.0;
    ops.push_back(tensor(bra, ComplexMatrix::Identity(dim_b, dim_b)));
  }
  return KrausChannel(std::move(ops));
}

// Random instances -----------------------------------------------------------

std::string_view to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kRandom: return "random";
    case InstanceKind::kOrthogonal: return "orthogonal";
    case InstanceKind::kIdentical: return "identical";
  }
  return "random";
}

InstanceKind instance_kind_from_string(std::string_view name) {
  for (auto k : {InstanceKind::kRandom, InstanceKind::kOrthogonal, InstanceKind::kIdentical}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::kInvalidInput, "unknown instance kind '" + std::string(name) + "'");
}

ScenarioConfig random_instance(std::size_t dim, std::uint64_t seed, double noise_strength,
                               InstanceKind kind) {
  if (dim < 2) throw Error(ErrorCode::kInvalidInput, "random_instance: dim must be at least 2");
  check_noise(noise_strength);
  const auto d = static_cast<Eigen::Index>(dim);
  Rng rng(seed);

  DensityOperator prior = random_density(d, rng);
  const UnitaryDynamics u(random_unitary(d, rng));
  const bool noisy = noise_strength > 0.0;

  AgentPipeline wanda{"Wanda", {}};
  AgentPipeline theo{"Theo", {}};
  switch (kind) {
    case InstanceKind::kRandom:
      if (noisy) wanda.steps.emplace_back(depolarizing_mixture(d, noise_strength));
      wanda.steps.emplace_back(u);
      theo.steps.emplace_back(u);
      if (noisy) theo.steps.emplace_back(dephasing_mixture(d, noise_strength));
      break;
    case InstanceKind::kOrthogonal: {
      const ComplexMatrix v = random_unitary(d, rng);
      wanda.steps = {u, replacement_channel(v.col(0))};
      theo.steps = {u, replacement_channel(v.col(1))};
      break;
    }
    case InstanceKind::kIdentical:
      wanda.steps.emplace_back(u);
      if (noisy) wanda.steps.emplace_back(depolarizing_mixture(d, noise_strength));
      theo.steps = wanda.steps;
      break;
  }
  return ScenarioConfig{std::move(prior), {std::move(wanda), std::move(theo)}, std::nullopt, {},
                        seed};
}

BatchReport batch_report(const std::vector<std::size_t>& dims, std::size_t count,
                         const std::vector<double>& noise_grid, std::uint64_t seed,
                         InstanceKind kind, unsigned threads) {
  if (count == 0) throw Error(ErrorCode::kInvalidInput, "batch count must be at least 1");
  if (dims.empty() || noise_grid.empty()) {
    throw Error(ErrorCode::kInvalidInput, "batch needs at least one dimension and noise level");
  }

  struct Outcome {
    bool compatible = false;
    bool hermitian = false;
    bool pooled = false;
    std::optional<double> residual;
  };

  BatchReport report{seed, kind, {}};
  for (std::size_t di = 0; di < dims.size(); ++di) {
    for (std::size_t ni = 0; ni < noise_grid.size(); ++ni) {
      std::vector<Outcome> outcomes(count);
      auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < count; i += stride) {
          const ScenarioConfig cfg = random_instance(
              dims[di], derive_seed(seed, {dims[di], ni, i}), noise_grid[ni], kind);
          const ScenarioResult r = run_scenario(cfg);
          Outcome& o = outcomes[i];
          o.compatible = r.verdict.compatible;
          o.pooled = r.pooling.has_value();
          o.residual = r.hermiticity_residual();
          o.hermitian = o.residual && *o.residual <= cfg.tolerances.herm_tol;
        }
      };
      const unsigned workers = std::max(1u, std::min<unsigned>(threads, count));
      if (workers == 1) {
        work(0, 1);
      } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
      }

      BatchCell cell{dims[di], noise_grid[ni], count, 0.0, 0.0, 0.0, std::nullopt};
      double residual_sum = 0.0;
      std::size_t residual_count = 0;
      std::size_t compatible = 0, hermitian = 0, pooled = 0;
      for (const Outcome& o : outcomes) {
        compatible += o.compatible;
        hermitian += o.hermitian;
        pooled += o.pooled;
        if (o.residual) {
          residual_sum += *o.residual;
          ++residual_count;
        }
      }
      const auto n = static_cast<double>(count);
      cell.compatible_fraction = static_cast<double>(compatible) / n;
      cell.hermitian_fraction = static_cast<double>(hermitian) / n;
      cell.pooled_fraction = static_cast<double>(pooled) / n;
      if (residual_count > 0) {
        cell.mean_hermiticity_residual = residual_sum / static_cast<double>(residual_count);
      }
      report.cells.push_back(cell);
    }
  }
  return report;
}

}  // namespace qagree
