#include "qagree/json_io.hpp"

#include <fstream>
#include <sstream>

namespace qagree::io {

namespace {

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidInput, message);
}

const json& field(const json& j, const char* key) {
  if (!j.is_object()) invalid(std::string("expected an object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) invalid(std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) invalid(what + " must be a number");
  return j.get<double>();
}

std::size_t count(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    invalid(what + " must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::string text(const json& j, const std::string& what) {
  if (!j.is_string()) invalid(what + " must be a string");
  return j.get<std::string>();
}

const json& array(const json& j, const std::string& what) {
  if (!j.is_array()) invalid(what + " must be an array");
  return j;
}

std::vector<std::string> labels(const json& j, const std::string& what) {
  std::vector<std::string> out;
  for (const auto& e : array(j, what)) {
    out.push_back(e.is_string() ? e.get<std::string>() : e.dump());
  }
  return out;
}

json entries_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      entries.push_back({m(i, j).real(), m(i, j).imag()});
    }
  }
  return entries;
}

ComplexMatrix entries_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  const json& entries = array(j, "entries");
  if (entries.size() != static_cast<std::size_t>(rows * cols)) {
    invalid("matrix has " + std::to_string(entries.size()) + " entries, expected " +
            std::to_string(rows * cols));
  }
  ComplexMatrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c, ++k) {
      const json& e = entries[k];
      if (!e.is_array() || e.size() != 2) invalid("matrix entry must be a [re, im] pair");
      m(r, c) = Complex(number(e[0], "real part"), number(e[1], "imaginary part"));
    }
  }
  if (!m.allFinite()) invalid("matrix entries must be finite");
  return m;
}

std::string kind_name(RegionKind k) {
  return k == RegionKind::kClassical ? "classical" : "quantum";
}

RegionKind kind_from(const std::string& s) {
  if (s == "classical") return RegionKind::kClassical;
  if (s == "quantum") return RegionKind::kQuantum;
  invalid("region kind must be 'quantum' or 'classical', got '" + s + "'");
}

json region_json(const RegionLabel& r) {
  return {{"name", r.name}, {"dim", r.dim}, {"kind", kind_name(r.kind)}};
}

RegionLabel region_from(const json& j, RegionKind default_kind) {
  RegionLabel r{text(field(j, "name"), "region name"), count(field(j, "dim"), "region dim"),
                default_kind};
  if (j.contains("kind")) r.kind = kind_from(text(j.at("kind"), "region kind"));
  return r;
}

std::string outcome_key(const Outcome& x) {
  std::string key;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(x[i]);
  }
  return key;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json pipeline_json(const AgentPipeline& p) {
  json steps = json::array();
  for (const auto& step : p.steps) {
    if (const auto* u = std::get_if<UnitaryDynamics>(&step)) {
      steps.push_back({{"type", "unitary"}, {"u", to_json(u->matrix())}});
    } else {
      json kraus = json::array();
      for (const auto& k : std::get<KrausChannel>(step).ops()) kraus.push_back(to_json(k));
      steps.push_back({{"type", "channel"}, {"kraus", kraus}});
    }
  }
  return {{"name", p.name}, {"steps", steps}};
}

AgentPipeline pipeline_from(const json& j) {
  AgentPipeline p{j.contains("name") ? text(j.at("name"), "pipeline name") : "", {}};
  for (const auto& s : array(field(j, "steps"), "steps")) {
    const std::string type = text(field(s, "type"), "step type");
    if (type == "unitary") {
      p.steps.emplace_back(UnitaryDynamics(matrix_from_json(field(s, "u"))));
    } else if (type == "channel") {
      std::vector<ComplexMatrix> ops;
      for (const auto& k : array(field(s, "kraus"), "kraus")) ops.push_back(matrix_from_json(k));
      p.steps.emplace_back(KrausChannel(std::move(ops)));
    } else {
      invalid("unknown step type '" + type + "'");
    }
  }
  return p;
}

template <class Pooled>
json report_json(const PoolingReport<Pooled>& r, json pooled) {
  return {{"pooled", std::move(pooled)},
          {"normalization_c", r.normalization_c},
          {"hermiticity_residual", r.hermiticity_residual},
          {"min_eigenvalue", r.min_eigenvalue},
          {"precondition_checked", r.precondition_checked},
          {"precondition_residual", optional_number(r.precondition_residual)}};
}

}  // namespace

// Matrices and states --------------------------------------------------------

json to_json(const ComplexMatrix& m) {
  if (m.rows() == m.cols()) return {{"dim", m.rows()}, {"entries", entries_json(m)}};
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries_json(m)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (j.is_object() && j.contains("dim")) {
    const auto n = static_cast<Eigen::Index>(count(j.at("dim"), "dim"));
    if (n == 0) invalid("dim must be positive");
    return entries_from_json(field(j, "entries"), n, n);
  }
  const auto rows = static_cast<Eigen::Index>(count(field(j, "rows"), "rows"));
  const auto cols = static_cast<Eigen::Index>(count(field(j, "cols"), "cols"));
  if (rows == 0 || cols == 0) invalid("rows and cols must be positive");
  return entries_from_json(field(j, "entries"), rows, cols);
}

DensityOperator density_from_json(const json& j, double tol) {
  return DensityOperator(matrix_from_json(j), tol);
}

json to_json(const ProbabilityDistribution& p) {
  return {{"outcomes", p.outcomes()}, {"probs", p.probs()}};
}

ProbabilityDistribution distribution_from_json(const json& j) {
  std::vector<double> probs;
  for (const auto& e : array(field(j, "probs"), "probs")) probs.push_back(number(e, "probability"));
  if (j.contains("outcomes")) {
    return ProbabilityDistribution(labels(j.at("outcomes"), "outcomes"), std::move(probs));
  }
  return ProbabilityDistribution(std::move(probs));
}

json to_json(const ConditionalDistribution& c) {
  json table = json::array();
  for (Eigen::Index x = 0; x < c.table().rows(); ++x) {
    json row = json::array();
    for (Eigen::Index y = 0; y < c.table().cols(); ++y) row.push_back(c.table()(x, y));
    table.push_back(row);
  }
  return {{"given_outcomes", c.given_outcomes()},
          {"out_outcomes", c.out_outcomes()},
          {"table", table}};
}

ConditionalDistribution conditional_from_json(const json& j) {
  const json& rows = array(field(j, "table"), "table");
  if (rows.empty()) invalid("table must have at least one row");
  const std::size_t cols = array(rows.front(), "table row").size();
  Eigen::MatrixXd table(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t x = 0; x < rows.size(); ++x) {
    const json& row = array(rows[x], "table row");
    if (row.size() != cols) invalid("table rows differ in length");
    for (std::size_t y = 0; y < cols; ++y) {
      table(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) =
          number(row[y], "table entry");
    }
  }
  if (j.contains("given_outcomes") || j.contains("out_outcomes")) {
    return ConditionalDistribution(labels(field(j, "given_outcomes"), "given_outcomes"),
                                   labels(field(j, "out_outcomes"), "out_outcomes"),
                                   std::move(table));
  }
  return ConditionalDistribution(std::move(table));
}

json to_json(const JointState& s) {
  json regions = json::array();
  for (const auto& r : s.regions()) regions.push_back(region_json(r));
  return {{"regions", regions},
          {"dim", s.op().dim()},
          {"entries", entries_json(s.op().matrix())},
          {"normalized", s.normalized()}};
}

JointState joint_from_json(const json& j) {
  std::vector<RegionLabel> regions;
  std::size_t total = 1;
  for (const auto& r : array(field(j, "regions"), "regions")) {
    regions.push_back(region_from(r, RegionKind::kQuantum));
    total *= regions.back().dim;
  }
  if (j.contains("dim") && count(j.at("dim"), "dim") != total) {
    invalid("dim does not match the product of region dimensions");
  }
  const auto n = static_cast<Eigen::Index>(total);
  const bool normalized = j.contains("normalized") ? j.at("normalized").get<bool>() : true;
  return JointState(std::move(regions), HermitianOperator(entries_from_json(field(j, "entries"), n, n)),
                    normalized);
}

json to_json(const HybridState& h) {
  json registers = json::array();
  for (const auto& r : h.classical_regions()) {
    registers.push_back({{"name", r.name}, {"dim", r.dim}});
  }
  json outcomes = json::array();
  json blocks = json::object();
  for (const auto& [x, b] : h.blocks()) {
    outcomes.push_back(x);
    blocks[outcome_key(x)] = to_json(b.matrix());
  }
  return {{"registers", registers},
          {"quantum", {{"name", h.quantum_region().name}, {"dim", h.quantum_region().dim}}},
          {"outcomes", outcomes},
          {"blocks", blocks},
          {"normalized", h.normalized()}};
}

HybridState hybrid_from_json(const json& j) {
  std::vector<RegionLabel> registers;
  for (const auto& r : array(field(j, "registers"), "registers")) {
    registers.push_back(region_from(r, RegionKind::kClassical));
  }
  const RegionLabel quantum = region_from(field(j, "quantum"), RegionKind::kQuantum);
  const json& blocks = field(j, "blocks");
  if (!blocks.is_object()) invalid("blocks must be an object");

  std::map<Outcome, ComplexMatrix> parsed;
  for (const auto& x : array(field(j, "outcomes"), "outcomes")) {
    Outcome outcome;
    for (const auto& v : array(x, "outcome")) outcome.push_back(count(v, "outcome value"));
    const std::string key = outcome_key(outcome);
    if (!blocks.contains(key)) invalid("no block for outcome " + key);
    if (!parsed.emplace(outcome, matrix_from_json(blocks.at(key))).second) {
      invalid("outcome " + key + " listed twice");
    }
  }
  if (parsed.size() != blocks.size()) invalid("blocks and outcomes disagree");
  const bool normalized = j.contains("normalized") ? j.at("normalized").get<bool>() : true;
  return make_hybrid(std::move(registers), quantum, std::move(parsed),
                     normalized ? TraceMode::kRequireUnit : TraceMode::kUnnormalized);
}

std::vector<HermitianOperator> likelihoods_from_json(const json& j) {
  std::vector<HermitianOperator> out;
  for (const auto& m : array(field(j, "likelihoods"), "likelihoods")) {
    out.emplace_back(matrix_from_json(m));
  }
  if (out.empty()) invalid("likelihoods must not be empty");
  return out;
}

// Reports --------------------------------------------------------------------

json to_json(const CompatibilityVerdict& v) {
  json out{{"compatible", v.compatible},
           {"intersection_rank", v.intersection_rank()},
           {"diagnostics", v.diagnostics}};
  if (const auto* outcomes = std::get_if<std::vector<std::size_t>>(&v.intersection)) {
    out["intersection"] = *outcomes;
  }
  return out;
}

json to_json(const ClassicalPoolingReport& r) { return report_json(r, to_json(r.pooled)); }

json to_json(const QuantumPoolingReport& r) { return report_json(r, to_json(r.pooled.matrix())); }

json to_json(const SufficientStatistic& s) {
  return {{"source_outcomes", s.source_outcomes}, {"classes", s.classes}, {"warnings", s.warnings}};
}

json to_json(const IndependenceCheck& c) {
  return {{"independent", c.independent},
          {"residual", c.residual},
          {"reversed_residual", c.reversed_residual}};
}

json to_json(const ScenarioConfig& cfg) {
  return {{"prior", to_json(cfg.prior.matrix())},
          {"pipelines", {pipeline_json(cfg.pipelines[0]), pipeline_json(cfg.pipelines[1])}},
          {"reference", cfg.reference ? pipeline_json(*cfg.reference) : json(nullptr)},
          {"tolerances",
           {{"rank_tol", cfg.tolerances.rank_tol},
            {"herm_tol", cfg.tolerances.herm_tol},
            {"psd_tol", cfg.tolerances.psd_tol},
            {"containment_tol", cfg.tolerances.containment_tol}}},
          {"seed", cfg.seed}};
}

ScenarioConfig scenario_from_json(const json& j) {
  const json& pipelines = array(field(j, "pipelines"), "pipelines");
  if (pipelines.size() != 2) invalid("a scenario needs exactly two pipelines");

  PoolingOptions tol;
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (t.contains("rank_tol")) tol.rank_tol = number(t.at("rank_tol"), "rank_tol");
    if (t.contains("herm_tol")) tol.herm_tol = number(t.at("herm_tol"), "herm_tol");
    if (t.contains("psd_tol")) tol.psd_tol = number(t.at("psd_tol"), "psd_tol");
    if (t.contains("containment_tol")) {
      tol.containment_tol = number(t.at("containment_tol"), "containment_tol");
    }
  }
  std::optional<AgentPipeline> reference;
  if (j.contains("reference") && !j.at("reference").is_null()) {
    reference = pipeline_from(j.at("reference"));
  }
  ScenarioConfig cfg{density_from_json(field(j, "prior"), tol.psd_tol),
                     {pipeline_from(pipelines[0]), pipeline_from(pipelines[1])},
                     std::move(reference),
                     tol,
                     j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 0};
  validate(cfg);
  return cfg;
}

json to_json(const ScenarioResult& r) {
  json error = nullptr;
  if (r.pooling_error) {
    error = {{"error", to_string(r.pooling_error->code)},
             {"message", r.pooling_error->message},
             {"residual", optional_number(r.pooling_error->residual)}};
  }
  return {{"sigma1", to_json(r.sigma1.matrix())},
          {"sigma2", to_json(r.sigma2.matrix())},
          {"verdict", to_json(r.verdict)},
          {"pooling", r.pooling ? to_json(*r.pooling) : json(nullptr)},
          {"pooling_error", error},
          {"hermiticity_residual", optional_number(r.hermiticity_residual())}};
}

json to_json(const BatchReport& r) {
  json cells = json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"dim", c.dim},
                     {"noise", c.noise},
                     {"count", c.count},
                     {"compatible_fraction", c.compatible_fraction},
                     {"hermitian_fraction", c.hermitian_fraction},
                     {"pooled_fraction", c.pooled_fraction},
                     {"mean_hermiticity_residual", optional_number(c.mean_hermiticity_residual)}});
  }
  return {{"seed", r.seed}, {"generator", to_string(r.kind)}, {"cells", cells}};
}

json error_json(const Error& e) {
  json out{{"error", to_string(e.code())}, {"message", e.what()}};
  if (e.residual()) out["residual"] = *e.residual();
  return out;
}

// Text -----------------------------------------------------------------------

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidInput, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string dump(const json& j) {
  return j.dump() + "\n";
}

}  // namespace qagree::io
