#include "qagree/regions.hpp"

#include <algorithm>
#include <set>

#include "qagree/error.hpp"

namespace qagree {

namespace {

double min_eigenvalue(const HermitianOperator& h) {
  return eigh(h).values.minCoeff();
}

void require_psd(const HermitianOperator& h, double tol, const std::string& what) {
  const Spectrum spec = eigh(h);
  const double scale = spec.values.cwiseAbs().maxCoeff();
  const double min_value = spec.values.minCoeff();
  if (min_value < -tol * std::max(1.0, scale)) {
    throw Error(ErrorCode::kNotPsd, what + " has eigenvalue " + std::to_string(min_value),
                min_value);
  }
}

std::size_t outcome_count(const std::vector<RegionLabel>& classical) {
  std::size_t n = 1;
  for (const auto& r : classical) n *= r.dim;
  return n;
}

// Outcome tuple for a flat classical index, first register most significant.
Outcome unflatten(std::size_t flat, const std::vector<RegionLabel>& classical) {
  Outcome x(classical.size());
  for (std::size_t k = classical.size(); k-- > 0;) {
    x[k] = flat % classical[k].dim;
    flat /= classical[k].dim;
  }
  return x;
}

std::size_t flatten(const Outcome& x, const std::vector<RegionLabel>& classical) {
  if (x.size() != classical.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "outcome tuple has " + std::to_string(x.size()) + " entries, expected " +
                    std::to_string(classical.size()));
  }
  std::size_t flat = 0;
  for (std::size_t k = 0; k < classical.size(); ++k) {
    if (x[k] >= classical[k].dim) {
      throw Error(ErrorCode::kInvalidInput,
                  "outcome " + std::to_string(x[k]) + " out of range for register '" +
                      classical[k].name + "'");
    }
    flat = flat * classical[k].dim + x[k];
  }
  return flat;
}

}  // namespace

// JointState -----------------------------------------------------------------

JointState::JointState(std::vector<RegionLabel> regions, HermitianOperator op, bool normalized,
                       double tol)
    : regions_(std::move(regions)), op_(std::move(op)), normalized_(normalized) {
  if (regions_.empty()) throw Error(ErrorCode::kInvalidInput, "joint state needs a region");
  std::set<std::string> names;
  std::size_t total = 1;
  for (const auto& r : regions_) {
    if (r.dim == 0) {
      throw Error(ErrorCode::kInvalidInput, "region '" + r.name + "' has zero dimension");
    }
    if (!names.insert(r.name).second) {
      throw Error(ErrorCode::kInvalidInput, "duplicate region name '" + r.name + "'");
    }
    total *= r.dim;
  }
  if (static_cast<std::size_t>(op_.dim()) != total) {
    throw Error(ErrorCode::kDimensionMismatch,
                "joint operator dimension " + std::to_string(op_.dim()) +
                    " differs from the product of region dimensions " + std::to_string(total));
  }
  if (normalized_ && std::abs(op_.trace() - 1.0) > tol) {
    throw Error(ErrorCode::kNotNormalized,
                "joint state trace " + std::to_string(op_.trace()) + " differs from 1");
  }
  const Dims layout = dims();
  for (std::size_t f = 0; f < regions_.size(); ++f) {
    require_psd(HermitianOperator::symmetrized(partial_trace(op_.matrix(), layout, {f})), tol,
                "marginal on elementary region '" + regions_[f].name + "'");
  }
}

Dims JointState::dims() const {
  Dims d;
  for (const auto& r : regions_) d.push_back(r.dim);
  return d;
}

std::size_t JointState::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].name == name) return i;
  }
  throw Error(ErrorCode::kUnknownRegion, "unknown region '" + name + "'");
}

std::vector<std::size_t> JointState::factors_of(const std::vector<std::string>& names) const {
  std::vector<std::size_t> factors;
  for (const auto& n : names) factors.push_back(index_of(n));
  std::sort(factors.begin(), factors.end());
  if (std::adjacent_find(factors.begin(), factors.end()) != factors.end()) {
    throw Error(ErrorCode::kInvalidInput, "region listed twice");
  }
  return factors;
}

JointState marginalize(const JointState& s, const std::vector<std::string>& keep) {
  const std::vector<std::size_t> factors = s.factors_of(keep);
  if (factors.empty()) {
    throw Error(ErrorCode::kInvalidInput, "marginalize: nothing to keep");
  }
  std::vector<RegionLabel> kept;
  for (std::size_t f : factors) kept.push_back(s.regions()[f]);
  return JointState(std::move(kept),
                    HermitianOperator::symmetrized(
                        partial_trace(s.op().matrix(), s.dims(), factors)),
                    s.normalized());
}

// Star product and conditioning -------------------------------------------

HermitianOperator star_product(const HermitianOperator& psi, const HermitianOperator& phi,
                               const FactorEmbedding& at, double psd_tol) {
  // The square root of 1 ⊗ Φ is 1 ⊗ Φ^{1/2}; take the root on the small space.
  const ComplexMatrix root = embed(sqrt_psd(phi, psd_tol).matrix(), at.dims, at.factors);
  if (root.rows() != psi.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "star product: embedded operator dimension " + std::to_string(root.rows()) +
                    " differs from " + std::to_string(psi.dim()));
  }
  return HermitianOperator::symmetrized(root * psi.matrix() * root);
}

HermitianOperator star_product(const HermitianOperator& psi, const HermitianOperator& phi,
                               double psd_tol) {
  if (phi.dim() != psi.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "star product: dimensions " + std::to_string(psi.dim()) + " and " +
                    std::to_string(phi.dim()) + " differ");
  }
  return star_product(psi, phi, FactorEmbedding{{static_cast<std::size_t>(psi.dim())}, {0}},
                      psd_tol);
}

ConditionalState condition(const JointState& s, const std::vector<std::string>& on,
                           double rank_tol) {
  const std::vector<std::size_t> factors = s.factors_of(on);
  if (factors.empty()) throw Error(ErrorCode::kInvalidInput, "condition: no conditioning region");
  const Dims dims = s.dims();

  const HermitianOperator marginal =
      HermitianOperator::symmetrized(partial_trace(s.op().matrix(), dims, factors));
  if (support(marginal, rank_tol).is_empty()) {
    throw Error(ErrorCode::kImpossibleEvent, "conditioning on impossible event");
  }
  const HermitianOperator inverse = pseudo_inverse(marginal, rank_tol);

  ConditionalState out{s.regions(), {}, {}, star_product(s.op(), inverse, {dims, factors})};
  for (std::size_t f = 0; f < s.regions().size(); ++f) {
    const bool given = std::binary_search(factors.begin(), factors.end(), f);
    (given ? out.given : out.target).push_back(s.regions()[f]);
  }
  return out;
}

// Hybrid states --------------------------------------------------------------

const HermitianOperator& HybridState::block(const Outcome& x) const {
  flatten(x, classical_);
  return blocks_.at(x);
}

JointState HybridState::to_joint() const {
  const auto dq = static_cast<Eigen::Index>(quantum_.dim);
  const auto n = static_cast<Eigen::Index>(outcome_count(classical_));
  ComplexMatrix m = ComplexMatrix::Zero(n * dq, n * dq);
  for (const auto& [x, b] : blocks_) {
    const auto flat = static_cast<Eigen::Index>(flatten(x, classical_));
    m.block(flat * dq, flat * dq, dq, dq) = b.matrix();
  }
  std::vector<RegionLabel> regions = classical_;
  regions.push_back(quantum_);
  return JointState(std::move(regions), HermitianOperator::symmetrized(m), normalized_);
}

HybridState HybridState::from_joint(const JointState& s, double tol) {
  const auto& regions = s.regions();
  if (regions.back().kind != RegionKind::kQuantum) {
    throw Error(ErrorCode::kInvalidInput, "hybrid state: last region must be quantum");
  }
  std::vector<RegionLabel> classical(regions.begin(), regions.end() - 1);
  for (const auto& r : classical) {
    if (r.kind != RegionKind::kClassical) {
      throw Error(ErrorCode::kInvalidInput,
                  "hybrid state: region '" + r.name + "' must be classical");
    }
  }
  const auto dq = static_cast<Eigen::Index>(regions.back().dim);
  const auto n = static_cast<Eigen::Index>(outcome_count(classical));
  const ComplexMatrix& m = s.op().matrix();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      if (a != b && max_abs(m.block(a * dq, b * dq, dq, dq)) > tol) {
        throw Error(ErrorCode::kInvalidInput,
                    "hybrid state: coherence between classical outcomes");
      }
    }
  }
  std::map<Outcome, ComplexMatrix> blocks;
  for (Eigen::Index a = 0; a < n; ++a) {
    blocks.emplace(unflatten(static_cast<std::size_t>(a), classical),
                   m.block(a * dq, a * dq, dq, dq));
  }
  return make_hybrid(std::move(classical), regions.back(), std::move(blocks),
                     s.normalized() ? TraceMode::kRequireUnit : TraceMode::kUnnormalized, tol);
}

HybridState make_hybrid(std::vector<RegionLabel> classical, RegionLabel quantum,
                        std::map<Outcome, ComplexMatrix> blocks, TraceMode mode, double tol) {
  if (classical.empty()) {
    throw Error(ErrorCode::kInvalidInput, "hybrid state needs a classical register");
  }
  for (auto& r : classical) {
    if (r.dim == 0) {
      throw Error(ErrorCode::kInvalidInput, "register '" + r.name + "' has no outcomes");
    }
    r.kind = RegionKind::kClassical;
  }
  if (quantum.dim == 0) throw Error(ErrorCode::kInvalidInput, "quantum region has zero dimension");
  quantum.kind = RegionKind::kQuantum;

  const auto dq = static_cast<Eigen::Index>(quantum.dim);
  HybridState h;
  double total = 0.0;
  for (auto& [x, m] : blocks) {
    flatten(x, classical);
    if (m.rows() != dq || m.cols() != dq) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "hybrid block has dimension " + std::to_string(m.rows()) + ", expected " +
                      std::to_string(dq));
    }
    HermitianOperator b(m);
    require_psd(b, tol, "hybrid block");
    total += b.trace();
    h.blocks_.emplace(x, std::move(b));
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "hybrid state has zero total trace");
  }
  switch (mode) {
    case TraceMode::kRequireUnit:
      if (std::abs(total - 1.0) > tol) {
        throw Error(ErrorCode::kNotNormalized,
                    "hybrid block traces sum to " + std::to_string(total));
      }
      break;
    case TraceMode::kRescale:
      for (auto& [x, b] : h.blocks_) b = HermitianOperator::symmetrized(b.matrix() / total);
      break;
    case TraceMode::kUnnormalized:
      h.normalized_ = false;
      break;
  }
  const std::size_t n = outcome_count(classical);
  for (std::size_t flat = 0; flat < n; ++flat) {
    h.blocks_.try_emplace(unflatten(flat, classical),
                          HermitianOperator::symmetrized(ComplexMatrix::Zero(dq, dq)));
  }
  h.classical_ = std::move(classical);
  h.quantum_ = std::move(quantum);
  return h;
}

HybridState make_hybrid(const std::vector<ComplexMatrix>& blocks, TraceMode mode, double tol) {
  if (blocks.empty()) throw Error(ErrorCode::kInvalidInput, "hybrid state needs a block");
  std::map<Outcome, ComplexMatrix> keyed;
  for (std::size_t x = 0; x < blocks.size(); ++x) keyed.emplace(Outcome{x}, blocks[x]);
  return make_hybrid({RegionLabel{"X", blocks.size(), RegionKind::kClassical}},
                     RegionLabel{"B", static_cast<std::size_t>(blocks.front().rows()),
                                 RegionKind::kQuantum},
                     std::move(keyed), mode, tol);
}

// Quantum Bayes rule ---------------------------------------------------------

double predictive_probability(const HermitianOperator& likelihood,
                              const DensityOperator& state) {
  if (likelihood.dim() != state.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "likelihood and state dimensions differ");
  }
  return (likelihood.matrix() * state.matrix()).trace().real();
}

DensityOperator quantum_bayes(const HermitianOperator& likelihood, const DensityOperator& prior,
                              double support_tol, double psd_tol) {
  const double p = predictive_probability(likelihood, prior);
  if (min_eigenvalue(likelihood) < -psd_tol * std::max(1.0, max_abs(likelihood.matrix()))) {
    throw Error(ErrorCode::kNotPsd, "likelihood operator is not PSD");
  }
  if (!(p > support_tol)) {
    throw Error(ErrorCode::kImpossibleEvent, "conditioning on impossible outcome", p);
  }
  const HermitianOperator joint = star_product(likelihood, prior.op(), psd_tol);
  return DensityOperator(HermitianOperator::symmetrized(joint.matrix() / p), psd_tol);
}

}  // namespace qagree
