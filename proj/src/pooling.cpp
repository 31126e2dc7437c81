#include "qagree/pooling.hpp"

#include <algorithm>
#include <cmath>

#include "qagree/error.hpp"

namespace qagree {

namespace {

// Groups indices by an equivalence decided on normalized representatives.
// `normalized[i]` is empty for a zero item.
template <class Vec, class Close>
std::vector<std::vector<std::size_t>> group_by(const std::vector<std::optional<Vec>>& normalized,
                                               Close close, std::vector<std::string>& warnings) {
  std::vector<std::vector<std::size_t>> classes;
  std::optional<std::size_t> zero_class;
  for (std::size_t x = 0; x < normalized.size(); ++x) {
    if (!normalized[x]) {
      if (!zero_class) {
        zero_class = classes.size();
        classes.emplace_back();
      }
      classes[*zero_class].push_back(x);
      warnings.push_back("outcome " + std::to_string(x) + " has zero likelihood");
      continue;
    }
    auto match = std::find_if(classes.begin(), classes.end(), [&](const auto& cls) {
      const auto& rep = normalized[cls.front()];
      return rep && close(*rep, *normalized[x]);
    });
    if (match == classes.end()) {
      classes.push_back({x});
    } else {
      match->push_back(x);
    }
  }
  return classes;
}

}  // namespace

// Pooling ----------------------------------------------------------------------

ClassicalPoolingReport classical_pool(const ProbabilityDistribution& prior,
                                      const ProbabilityDistribution& q1,
                                      const ProbabilityDistribution& q2, double support_tol) {
  if (prior.outcomes() != q1.outcomes() || prior.outcomes() != q2.outcomes()) {
    throw Error(ErrorCode::kDimensionMismatch, "prior and posteriors use different outcome sets");
  }
  const std::size_t n = prior.size();
  bool overlap = false;
  std::vector<double> weights(n, 0.0);
  for (std::size_t y = 0; y < n; ++y) {
    const bool shared = q1[y] > support_tol && q2[y] > support_tol;
    if (!shared) continue;
    overlap = true;
    if (!(prior[y] > support_tol)) {
      throw Error(ErrorCode::kPriorExcludesSupport,
                  "prior excludes jointly supported outcome '" + prior.outcomes()[y] + "'");
    }
    weights[y] = q1[y] * q2[y] / prior[y];
  }
  if (!overlap) {
    throw Error(ErrorCode::kIncompatible, "agents incompatible, no pooled state");
  }
  double total = 0.0;
  for (double w : weights) total += w;
  const double c = 1.0 / total;
  for (double& w : weights) w *= c;

  const double min_entry = *std::min_element(weights.begin(), weights.end());
  return ClassicalPoolingReport{ProbabilityDistribution(prior.outcomes(), std::move(weights), 1e-9),
                                c, 0.0, min_entry, false, std::nullopt};
}

QuantumPoolingReport quantum_pool(const DensityOperator& prior, const DensityOperator& s1,
                                  const DensityOperator& s2, const PoolingOptions& opts,
                                  const std::optional<IndependenceCheck>& precondition) {
  if (prior.dim() != s1.dim() || prior.dim() != s2.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "prior and posteriors act on different spaces");
  }
  if (!quantum_compatible(s1, s2, opts.rank_tol).compatible) {
    throw Error(ErrorCode::kIncompatible, "incompatible assignments");
  }
  const ComplexMatrix outside =
      ComplexMatrix::Identity(prior.dim(), prior.dim()) - support(prior.op(), opts.rank_tol).projector();
  const double escape =
      std::max(max_abs(outside * s1.matrix()), max_abs(outside * s2.matrix()));
  if (escape > opts.containment_tol) {
    throw Error(ErrorCode::kPriorExcludesSupport, "posterior support escapes the prior support",
                escape);
  }

  const ComplexMatrix product =
      s1.matrix() * pseudo_inverse(prior.op(), opts.rank_tol).matrix() * s2.matrix();
  const double scale = max_abs(product);
  const double residual = scale > 0.0 ? hermiticity_residual(product) / scale : 0.0;
  if (residual > opts.herm_tol) {
    throw Error(ErrorCode::kNonHermitianProduct,
                "non-Hermitian pooling product (relative residual " + std::to_string(residual) +
                    ")",
                residual);
  }
  const ComplexMatrix symmetric = (product + product.adjoint()) / 2.0;
  const double trace = symmetric.trace().real();
  if (!(trace > 0.0)) {
    throw Error(ErrorCode::kNegativePooledEigenvalue, "pooling product has non-positive trace",
                trace);
  }
  const HermitianOperator pooled = HermitianOperator::symmetrized(symmetric / trace);
  const double min_eigenvalue = eigh(pooled).values.minCoeff();
  if (min_eigenvalue < -opts.psd_tol) {
    throw Error(ErrorCode::kNegativePooledEigenvalue,
                "negative pooled eigenvalue " + std::to_string(min_eigenvalue), min_eigenvalue);
  }

  return QuantumPoolingReport{DensityOperator(pooled, opts.psd_tol),
                              1.0 / trace,
                              residual,
                              min_eigenvalue,
                              precondition.has_value(),
                              precondition ? std::optional(precondition->residual) : std::nullopt};
}

// Sufficient statistics ------------------------------------------------------

std::size_t SufficientStatistic::class_of(std::size_t x) const {
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (std::find(classes[c].begin(), classes[c].end(), x) != classes[c].end()) return c;
  }
  throw Error(ErrorCode::kInvalidInput, "outcome " + std::to_string(x) + " is not classified");
}

SufficientStatistic minimal_sufficient_statistic(const ConditionalDistribution& cond,
                                                 double tol) {
  const Eigen::MatrixXd& table = cond.table();
  std::vector<std::optional<Eigen::VectorXd>> rows;
  for (Eigen::Index x = 0; x < table.rows(); ++x) {
    const double total = table.row(x).sum();
    if (total > 0.0) {
      rows.emplace_back(table.row(x).transpose() / total);
    } else {
      rows.emplace_back();
    }
  }
  SufficientStatistic stat{cond.out_outcomes(), {}, {}};
  stat.classes = group_by(
      rows,
      [tol](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return (a - b).cwiseAbs().maxCoeff() <= tol;
      },
      stat.warnings);
  return stat;
}

SufficientStatistic quantum_minimal_sufficient_statistic(
    const std::vector<HermitianOperator>& likelihoods, double tol) {
  std::vector<std::optional<ComplexMatrix>> normalized;
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < likelihoods.size(); ++x) {
    const auto& op = likelihoods[x];
    if (op.dim() != likelihoods.front().dim()) {
      throw Error(ErrorCode::kDimensionMismatch, "likelihood operators differ in dimension");
    }
    const double trace = op.trace();
    if (trace > 0.0 && max_abs(op.matrix()) > 0.0) {
      normalized.emplace_back(op.matrix() / trace);
    } else {
      normalized.emplace_back();
    }
    labels.push_back(std::to_string(x));
  }
  SufficientStatistic stat{std::move(labels), {}, {}};
  stat.classes = group_by(
      normalized,
      [tol](const ComplexMatrix& a, const ComplexMatrix& b) { return max_abs(a - b) <= tol; },
      stat.warnings);
  return stat;
}

IndependenceCheck check_conditional_independence(
    const std::map<std::size_t, ComplexMatrix>& h1, const std::map<std::size_t, ComplexMatrix>& h2,
    const std::map<ClassPair, ComplexMatrix>& joint, double tol) {
  for (const auto& [pair, op] : joint) {
    if (!h1.contains(pair.first) || !h2.contains(pair.second)) {
      throw Error(ErrorCode::kMissingClassPair,
                  "joint operator for unknown class pair (" + std::to_string(pair.first) + ", " +
                      std::to_string(pair.second) + ")");
    }
  }
  IndependenceCheck check;
  for (const auto& [a, left] : h1) {
    for (const auto& [b, right] : h2) {
      const auto it = joint.find({a, b});
      if (it == joint.end()) {
        throw Error(ErrorCode::kMissingClassPair,
                    "missing class pair (" + std::to_string(a) + ", " + std::to_string(b) + ")");
      }
      const ComplexMatrix& j = it->second;
      if (left.rows() != j.rows() || right.rows() != j.rows() || left.cols() != right.rows()) {
        throw Error(ErrorCode::kDimensionMismatch, "conditional operators differ in dimension");
      }
      check.residual = std::max(check.residual, max_abs(j - left * right));
      check.reversed_residual = std::max(check.reversed_residual, max_abs(j - right * left));
    }
  }
  check.independent = check.residual <= tol;
  return check;
}

PooledMap pooled_map(Assignment assign1, Assignment assign2, PoolingOptions opts) {
  return [a1 = std::move(assign1), a2 = std::move(assign2), opts](const DensityOperator& rho) {
    return quantum_pool(rho, a1(rho), a2(rho), opts);
  };
}

}  // namespace qagree
