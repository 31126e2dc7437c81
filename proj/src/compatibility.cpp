#include "qagree/compatibility.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <set>

#include "qagree/error.hpp"

namespace qagree {

namespace {

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

void require_same_outcomes(const ProbabilityDistribution& a, const ProbabilityDistribution& b) {
  if (a.outcomes() != b.outcomes()) {
    throw Error(ErrorCode::kDimensionMismatch, "distributions are over different outcome sets");
  }
}

double max_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// ρ_{B|Xk=x}: the blocks with register `reg` equal to x, summed and
// normalized. Returns nullopt for a zero-weight event.
std::optional<ComplexMatrix> conditional_block(const HybridState& h, std::size_t reg,
                                               std::size_t x, double support_tol) {
  const auto dq = static_cast<Eigen::Index>(h.quantum_region().dim);
  ComplexMatrix sum = ComplexMatrix::Zero(dq, dq);
  for (const auto& [outcome, block] : h.blocks()) {
    if (outcome[reg] == x) sum += block.matrix();
  }
  const double weight = sum.trace().real();
  if (!(weight > support_tol)) return std::nullopt;
  return ComplexMatrix(sum / weight);
}

}  // namespace

// Distributions --------------------------------------------------------------

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> probs, double tol)
    : ProbabilityDistribution(default_labels(probs.size()), probs, tol) {}

ProbabilityDistribution::ProbabilityDistribution(std::vector<std::string> outcomes,
                                                 std::vector<double> probs, double tol)
    : outcomes_(std::move(outcomes)), probs_(std::move(probs)) {
  if (probs_.empty()) throw Error(ErrorCode::kInvalidInput, "distribution has no outcomes");
  if (outcomes_.size() != probs_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "outcome labels and probabilities differ in length");
  }
  if (std::set<std::string>(outcomes_.begin(), outcomes_.end()).size() != outcomes_.size()) {
    throw Error(ErrorCode::kInvalidInput, "duplicate outcome label");
  }
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) {
      throw Error(ErrorCode::kInvalidInput, "probability " + std::to_string(p) + " is invalid");
    }
  }
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(total - 1.0) > tol) {
    throw Error(ErrorCode::kNotNormalized, "probabilities sum to " + std::to_string(total),
                std::abs(total - 1.0));
  }
}

ProbabilityDistribution ProbabilityDistribution::uniform(std::size_t n) {
  return ProbabilityDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ConditionalDistribution::ConditionalDistribution(Eigen::MatrixXd table, double tol)
    : ConditionalDistribution(default_labels(static_cast<std::size_t>(table.cols())),
                              default_labels(static_cast<std::size_t>(table.rows())),
                              table, tol) {}

ConditionalDistribution::ConditionalDistribution(std::vector<std::string> given_outcomes,
                                                 std::vector<std::string> out_outcomes,
                                                 Eigen::MatrixXd table, double tol)
    : given_(std::move(given_outcomes)), out_(std::move(out_outcomes)), table_(std::move(table)) {
  if (table_.size() == 0) throw Error(ErrorCode::kInvalidInput, "empty conditional table");
  if (static_cast<std::size_t>(table_.rows()) != out_.size() ||
      static_cast<std::size_t>(table_.cols()) != given_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "conditional table shape does not match labels");
  }
  if (!table_.allFinite() || table_.minCoeff() < 0.0) {
    throw Error(ErrorCode::kInvalidInput, "conditional table entries must be finite and >= 0");
  }
  for (Eigen::Index y = 0; y < table_.cols(); ++y) {
    const double total = table_.col(y).sum();
    if (std::abs(total - 1.0) > tol) {
      throw Error(ErrorCode::kNotNormalized,
                  "conditional column " + std::to_string(y) + " sums to " + std::to_string(total));
    }
  }
}

TripleDistribution::TripleDistribution(std::size_t y_count, std::size_t x1_count,
                                       std::size_t x2_count, std::vector<double> probs,
                                       double tol)
    : ny_(y_count), nx1_(x1_count), nx2_(x2_count), probs_(std::move(probs)) {
  if (probs_.size() != ny_ * nx1_ * nx2_ || probs_.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "joint table size does not match its shape");
  }
  ProbabilityDistribution check(probs_, tol);
}

double TripleDistribution::at(std::size_t y, std::size_t x1, std::size_t x2) const {
  return probs_[(y * nx1_ + x1) * nx2_ + x2];
}

Eigen::Index CompatibilityVerdict::intersection_rank() const {
  if (const auto* outcomes = std::get_if<std::vector<std::size_t>>(&intersection)) {
    return static_cast<Eigen::Index>(outcomes->size());
  }
  return std::get<Subspace>(intersection).rank();
}

// Decision procedures --------------------------------------------------------

CompatibilityVerdict classical_compatible(const ProbabilityDistribution& q1,
                                          const ProbabilityDistribution& q2, double support_tol) {
  require_same_outcomes(q1, q2);
  std::vector<std::size_t> shared;
  for (std::size_t y = 0; y < q1.size(); ++y) {
    if (q1[y] > support_tol && q2[y] > support_tol) shared.push_back(y);
  }
  CompatibilityVerdict v;
  v.compatible = !shared.empty();
  v.diagnostics = v.compatible
                      ? std::to_string(shared.size()) + " jointly supported outcome(s)"
                      : "supports are disjoint";
  v.intersection = std::move(shared);
  return v;
}

CompatibilityVerdict quantum_compatible(const DensityOperator& s1, const DensityOperator& s2,
                                        double rank_tol) {
  if (s1.dim() != s2.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "states act on spaces of different dimension");
  }
  const Subspace p = support(s1.op(), rank_tol);
  const Subspace q = support(s2.op(), rank_tol);
  Subspace shared = intersect(p, q, rank_tol);
  CompatibilityVerdict v;
  v.compatible = !shared.is_empty();
  v.diagnostics = "support ranks " + std::to_string(p.rank()) + " and " +
                  std::to_string(q.rank()) + ", intersection rank " +
                  std::to_string(shared.rank());
  v.intersection = std::move(shared);
  return v;
}

// Witness verifiers ----------------------------------------------------------

ProbabilityDistribution classical_posterior(const ConditionalDistribution& cond,
                                            const ProbabilityDistribution& prior, std::size_t x,
                                            double support_tol) {
  if (cond.given_count() != prior.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "test and prior have different outcome counts");
  }
  if (x >= cond.out_count()) {
    throw Error(ErrorCode::kInvalidInput, "test outcome " + std::to_string(x) + " out of range");
  }
  std::vector<double> post(prior.size());
  double predictive = 0.0;
  for (std::size_t y = 0; y < prior.size(); ++y) {
    post[y] = cond.table()(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) * prior[y];
    predictive += post[y];
  }
  if (!(predictive > support_tol)) {
    throw Error(ErrorCode::kImpossibleEvent, "conditioning on impossible outcome", predictive);
  }
  for (double& p : post) p /= predictive;
  return ProbabilityDistribution(prior.outcomes(), std::move(post), 1e-9);
}

bool verify_objective_classical(const ProbabilityDistribution& q1,
                                const ProbabilityDistribution& q2,
                                const TripleDistribution& joint, std::size_t x1, std::size_t x2,
                                double tol) {
  require_same_outcomes(q1, q2);
  if (joint.y_count() != q1.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "joint and assignments disagree on Out(Y)");
  }
  if (x1 >= joint.x1_count() || x2 >= joint.x2_count()) {
    throw Error(ErrorCode::kInvalidInput, "data outcome absent from the joint distribution");
  }
  const std::size_t ny = joint.y_count();

  double both = 0.0;
  for (std::size_t y = 0; y < ny; ++y) both += joint.at(y, x1, x2);
  if (!(both > tol)) return false;

  std::vector<double> given1(ny, 0.0);
  std::vector<double> given2(ny, 0.0);
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t b = 0; b < joint.x2_count(); ++b) given1[y] += joint.at(y, x1, b);
    for (std::size_t a = 0; a < joint.x1_count(); ++a) given2[y] += joint.at(y, a, x2);
  }
  const double w1 = std::accumulate(given1.begin(), given1.end(), 0.0);
  const double w2 = std::accumulate(given2.begin(), given2.end(), 0.0);
  for (double& p : given1) p /= w1;
  for (double& p : given2) p /= w2;
  return max_difference(given1, q1.probs()) <= tol && max_difference(given2, q2.probs()) <= tol;
}

bool verify_subjective_classical(const ProbabilityDistribution& q1,
                                 const ProbabilityDistribution& q2,
                                 const ConditionalDistribution& cond, std::size_t x_tilde,
                                 double tol) {
  require_same_outcomes(q1, q2);
  if (cond.given_count() != q1.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "test and assignments disagree on Out(Y)");
  }
  if (x_tilde >= cond.out_count()) {
    throw Error(ErrorCode::kInvalidInput, "test outcome absent from the conditional table");
  }
  for (const auto* q : {&q1, &q2}) {
    for (std::size_t x = 0; x < cond.out_count(); ++x) {
      double predictive = 0.0;
      for (std::size_t y = 0; y < q->size(); ++y) {
        predictive +=
            cond.table()(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) * (*q)[y];
      }
      if (!(predictive > kDefaultSupportTol)) return false;
    }
  }
  const ProbabilityDistribution p1 = classical_posterior(cond, q1, x_tilde);
  const ProbabilityDistribution p2 = classical_posterior(cond, q2, x_tilde);
  return max_difference(p1.probs(), p2.probs()) <= tol;
}

bool verify_objective_quantum(const DensityOperator& s1, const DensityOperator& s2,
                              const HybridState& hybrid, std::size_t x1, std::size_t x2,
                              double tol) {
  if (hybrid.classical_regions().size() != 2) {
    throw Error(ErrorCode::kInvalidInput, "objective witness needs registers (X1, X2)");
  }
  if (s1.dim() != s2.dim() ||
      static_cast<std::size_t>(s1.dim()) != hybrid.quantum_region().dim) {
    throw Error(ErrorCode::kDimensionMismatch, "witness and states act on different spaces");
  }
  if (x1 >= hybrid.classical_regions()[0].dim || x2 >= hybrid.classical_regions()[1].dim) {
    throw Error(ErrorCode::kInvalidInput, "data outcome absent from the hybrid state");
  }
  if (!(hybrid.block({x1, x2}).trace() > tol)) return false;

  const auto c1 = conditional_block(hybrid, 0, x1, tol);
  const auto c2 = conditional_block(hybrid, 1, x2, tol);
  if (!c1 || !c2) return false;
  return max_abs(*c1 - s1.matrix()) <= tol && max_abs(*c2 - s2.matrix()) <= tol;
}

bool verify_subjective_quantum(const DensityOperator& s1, const DensityOperator& s2,
                               const std::vector<HermitianOperator>& likelihoods,
                               std::size_t x_tilde, double tol) {
  if (s1.dim() != s2.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "states act on spaces of different dimension");
  }
  if (x_tilde >= likelihoods.size()) {
    throw Error(ErrorCode::kInvalidInput, "test outcome absent from the measurement");
  }
  ComplexMatrix total = ComplexMatrix::Zero(s1.dim(), s1.dim());
  for (const auto& e : likelihoods) {
    if (e.dim() != s1.dim()) {
      throw Error(ErrorCode::kDimensionMismatch, "measurement effect has the wrong dimension");
    }
    total += e.matrix();
  }
  const double defect = max_abs(total - ComplexMatrix::Identity(s1.dim(), s1.dim()));
  if (defect > tol) {
    throw Error(ErrorCode::kInvalidInput, "likelihoods do not sum to the identity", defect);
  }
  for (const auto* s : {&s1, &s2}) {
    for (const auto& e : likelihoods) {
      if (!(predictive_probability(e, *s) > kDefaultSupportTol)) return false;
    }
  }
  const DensityOperator p1 = quantum_bayes(likelihoods[x_tilde], s1);
  const DensityOperator p2 = quantum_bayes(likelihoods[x_tilde], s2);
  return max_abs(p1.matrix() - p2.matrix()) <= tol;
}

}  // namespace qagree
