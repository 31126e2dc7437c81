#ifndef QAGREE_JSON_IO_HPP
#define QAGREE_JSON_IO_HPP

// JSON interchange. Matrices are {"dim": n, "entries": [[re, im], ...]} in
// row-major order with exactly n² entries; rectangular matrices (Kraus
// operators) use {"rows": r, "cols": c, "entries": ...}. Parsers throw
// Error(kInvalidInput) on any shape or type violation.

#include <string>
#include <vector>

#include "json.hpp"
#include "qagree/compatibility.hpp"
#include "qagree/error.hpp"
#include "qagree/pooling.hpp"
#include "qagree/regions.hpp"
#include "qagree/scenario.hpp"

namespace qagree::io {

using json = nlohmann::json;

json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

DensityOperator density_from_json(const json& j, double tol = kDefaultPsdTol);

json to_json(const ProbabilityDistribution& p);
ProbabilityDistribution distribution_from_json(const json& j);

// {"given_outcomes": [...], "out_outcomes": [...], "table": [[row for x], ...]}
json to_json(const ConditionalDistribution& c);
ConditionalDistribution conditional_from_json(const json& j);

// {"regions": [{"name", "dim", "kind"}], "dim": n, "entries": [...], "normalized": bool}
json to_json(const JointState& s);
JointState joint_from_json(const json& j);

// {"registers": [{"name", "dim"}], "quantum": {"name", "dim"},
//  "outcomes": [[x1, ...], ...], "blocks": {"x1,...": matrix}, "normalized": bool}
json to_json(const HybridState& h);
HybridState hybrid_from_json(const json& j);

// {"likelihoods": [matrix, ...]}
std::vector<HermitianOperator> likelihoods_from_json(const json& j);

json to_json(const CompatibilityVerdict& v);
json to_json(const ClassicalPoolingReport& r);
json to_json(const QuantumPoolingReport& r);
json to_json(const SufficientStatistic& s);
json to_json(const IndependenceCheck& c);

// {"prior": matrix, "pipelines": [pipeline, pipeline], "reference": pipeline | null,
//  "tolerances": {...}, "seed": n}; a pipeline is {"name", "steps": [step]} and a
// step is {"type": "unitary", "u": matrix} or {"type": "channel", "kraus": [matrix]}.
json to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const json& j);

json to_json(const ScenarioResult& r);
json to_json(const BatchReport& r);

// {"error": <failed precondition>, "message": ..., "residual": x?}
json error_json(const Error& e);

json parse(const std::string& text);
json read_file(const std::string& path);
// Compact, deterministic rendering (object keys sorted) with a trailing newline.
std::string dump(const json& j);

}  // namespace qagree::io

#endif  // QAGREE_JSON_IO_HPP
