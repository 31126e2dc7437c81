#include "qagree/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

#include "CLI11.hpp"
#include "qagree/json_io.hpp"

namespace qagree::cli {

namespace {

using io::json;

struct Options {
  std::string output = "-";
  double rank_tol = kDefaultRankTol;
  double herm_tol = PoolingOptions{}.herm_tol;
  std::vector<std::string> inputs;
  std::vector<std::size_t> dims;
  std::vector<double> noise;
  std::size_t count = 100;
  std::uint64_t seed = 0;
  std::string generator = "random";
  unsigned threads = 1;
};

struct Outcome {
  json payload;
  int code = kSuccess;
};

void emit(const Options& opts, const json& payload, std::ostream& out) {
  const std::string text = io::dump(payload);
  if (opts.output == "-") {
    out << text;
    return;
  }
  std::ofstream file(opts.output, std::ios::binary);
  if (!file) throw Error(ErrorCode::kInvalidInput, "cannot write '" + opts.output + "'");
  file << text;
}

PoolingOptions pooling_options(const Options& o) {
  PoolingOptions p;
  p.rank_tol = o.rank_tol;
  p.herm_tol = o.herm_tol;
  return p;
}

Outcome verdict_outcome(const CompatibilityVerdict& v) {
  json payload = io::to_json(v);
  if (v.compatible) return {payload, kSuccess};
  payload["error"] = to_string(ErrorCode::kIncompatible);
  return {payload, kDomainError};
}

Outcome compat_classical(const Options& o) {
  const auto q1 = io::distribution_from_json(io::read_file(o.inputs.at(0)));
  const auto q2 = io::distribution_from_json(io::read_file(o.inputs.at(1)));
  return verdict_outcome(classical_compatible(q1, q2));
}

Outcome compat_quantum(const Options& o) {
  const auto s1 = io::density_from_json(io::read_file(o.inputs.at(0)));
  const auto s2 = io::density_from_json(io::read_file(o.inputs.at(1)));
  return verdict_outcome(quantum_compatible(s1, s2, o.rank_tol));
}

Outcome pool_classical(const Options& o) {
  const auto prior = io::distribution_from_json(io::read_file(o.inputs.at(0)));
  const auto q1 = io::distribution_from_json(io::read_file(o.inputs.at(1)));
  const auto q2 = io::distribution_from_json(io::read_file(o.inputs.at(2)));
  return {io::to_json(classical_pool(prior, q1, q2))};
}

Outcome pool_quantum(const Options& o) {
  const auto prior = io::density_from_json(io::read_file(o.inputs.at(0)));
  const auto s1 = io::density_from_json(io::read_file(o.inputs.at(1)));
  const auto s2 = io::density_from_json(io::read_file(o.inputs.at(2)));
  return {io::to_json(quantum_pool(prior, s1, s2, pooling_options(o)))};
}

Outcome suffstat(const Options& o) {
  const json input = io::read_file(o.inputs.at(0));
  if (input.is_object() && input.contains("likelihoods")) {
    return {io::to_json(quantum_minimal_sufficient_statistic(io::likelihoods_from_json(input)))};
  }
  return {io::to_json(minimal_sufficient_statistic(io::conditional_from_json(input)))};
}

Outcome scenario_run(const Options& o) {
  ScenarioConfig cfg = io::scenario_from_json(io::read_file(o.inputs.at(0)));
  cfg.tolerances.rank_tol = o.rank_tol;
  cfg.tolerances.herm_tol = o.herm_tol;
  return {io::to_json(run_scenario(cfg))};
}

Outcome scenario_batch(const Options& o) {
  const std::vector<double> noise = o.noise.empty() ? std::vector<double>{0.0} : o.noise;
  return {io::to_json(batch_report(o.dims, o.count, noise, o.seed,
                                   instance_kind_from_string(o.generator), o.threads))};
}

Outcome randgen(const Options& o) {
  const double noise = o.noise.empty() ? 0.0 : o.noise.front();
  if (o.dims.size() != 1) throw Error(ErrorCode::kInvalidInput, "randgen takes one --dim");
  return {io::to_json(
      random_instance(o.dims.front(), o.seed, noise, instance_kind_from_string(o.generator)))};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opts;
  CLI::App app{"Compatibility and pooling of quantum state assignments"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("-o,--output", opts.output, "Output path, '-' for standard output");
  app.add_option("--rank-tol", opts.rank_tol, "Relative rank tolerance for supports");
  app.add_option("--herm-tol", opts.herm_tol, "Relative Hermiticity tolerance for pooling");

  std::map<CLI::App*, std::function<Outcome(const Options&)>> handlers;
  auto files = [&](const char* name, const char* help, std::size_t n,
                   std::function<Outcome(const Options&)> handler) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("inputs", opts.inputs, "Input JSON files")
        ->required()
        ->expected(static_cast<int>(n))
        ->check(CLI::ExistingFile);
    handlers[sub] = std::move(handler);
  };
  files("compat-classical", "Support-overlap verdict for two distributions", 2, compat_classical);
  files("compat-quantum", "Support-intersection verdict for two density operators", 2,
        compat_quantum);
  files("pool-classical", "Pool two posteriors against a prior distribution", 3, pool_classical);
  files("pool-quantum", "Pool two density operators against a prior", 3, pool_quantum);
  files("suffstat", "Minimal sufficient statistic of a likelihood family", 1, suffstat);
  files("scenario-run", "Run a two-agent scenario configuration", 1, scenario_run);

  CLI::App* batch = app.add_subcommand("scenario-batch", "Summary over random scenarios");
  batch->add_option("--dim", opts.dims, "Hilbert space dimension(s)")->required();
  batch->add_option("--count", opts.count, "Instances per cell")->check(CLI::PositiveNumber);
  batch->add_option("--noise", opts.noise, "Detector noise level(s) in [0, 1]");
  batch->add_option("--seed", opts.seed, "Base seed");
  batch->add_option("--generator", opts.generator, "random | orthogonal | identical");
  batch->add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
  handlers[batch] = scenario_batch;

  CLI::App* gen = app.add_subcommand("randgen", "Write a random scenario configuration");
  gen->add_option("--dim", opts.dims, "Hilbert space dimension")->required();
  gen->add_option("--noise", opts.noise, "Detector noise level in [0, 1]");
  gen->add_option("--seed", opts.seed, "Seed");
  gen->add_option("--generator", opts.generator, "random | orthogonal | identical");
  handlers[gen] = randgen;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    err << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    out << io::dump({{"error", "invalid arguments"}, {"message", e.what()}});
    err << app.help();
    return kMalformedInput;
  }

  try {
    const Outcome result = handlers.at(app.get_subcommands().front())(opts);
    emit(opts, result.payload, out);
    return result.code;
  } catch (const Error& e) {
    emit(opts, io::error_json(e), out);
    return is_domain_error(e.code()) ? kDomainError : kMalformedInput;
  } catch (const nlohmann::json::exception& e) {
    emit(opts, io::error_json(Error(ErrorCode::kInvalidInput, e.what())), out);
    return kMalformedInput;
  }
}

}  // namespace qagree::cli
