#include "doctest.h"
#include "fixtures.hpp"
#include "support.hpp"

#include "qagree/scenario.hpp"

using namespace qagree;
using namespace qagree::testing;

namespace {

std::vector<double> diagonal(const ComplexMatrix& m) {
  std::vector<double> d(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) d[std::size_t(i)] = m(i, i).real();
  return d;
}

ScenarioConfig config(const ComplexMatrix& prior, AgentPipeline a, AgentPipeline b) {
  return ScenarioConfig{DensityOperator(prior), {std::move(a), std::move(b)}, std::nullopt, {}, 0};
}

}  // namespace

TEST_CASE("channel validation") {
  CHECK(error_of([] { KrausChannel({diag({1.0, 0.5})}); }) == ErrorCode::kNotTracePreserving);
  CHECK(error_of([] { KrausChannel(std::vector<ComplexMatrix>{}); }) == ErrorCode::kInvalidInput);
  CHECK(error_of([] { UnitaryDynamics(diag({1.0, 2.0})); }) == ErrorCode::kNotUnitary);
  CHECK(error_of([] { depolarizing_mixture(2, 1.5); }) == ErrorCode::kInvalidInput);
  CHECK(error_of([] { apply_channel(identity_channel(3), dens(identity(2) / 2.0)); }) ==
        ErrorCode::kDimensionMismatch);
}

TEST_CASE("apply_channel") {
  Rng rng(51);
  SUBCASE("identity channel") {
    const DensityOperator rho = random_density(3, rng);
    CHECK(dist(apply_channel(identity_channel(3), rho).matrix(), rho.matrix()) < 1e-15);
  }
  SUBCASE("full dephasing of |+>") {
    const auto out = apply_channel(dephasing_mixture(2, 1.0), dens(ket_bra(plus(), plus())));
    CHECK(dist(out.matrix(), identity(2) / 2.0) < 1e-15);
  }
  SUBCASE("partial-trace coarse-graining equals the partial trace") {
    const auto ra = random_density(3, rng).matrix();
    const auto rb = random_density(2, rng).matrix();
    const auto out = apply_channel(partial_trace_channel(3, 2), dens(tensor(ra, rb)));
    CHECK(dist(out.matrix(), rb) < 1e-14);
    const DensityOperator ent = random_density(6, rng);
    CHECK(dist(apply_channel(partial_trace_channel(3, 2), ent).matrix(),
               partial_trace(ent.matrix(), {3, 2}, {1})) < 1e-14);
  }
  SUBCASE("depolarizing and replacement") {
    const DensityOperator rho = random_density(4, rng);
    CHECK(dist(apply_channel(depolarizing_mixture(4, 0.25), rho).matrix(),
               0.75 * rho.matrix() + 0.25 * identity(4) / 4.0) < 1e-14);
    const ComplexVector psi = random_unitary(4, rng).col(2);
    CHECK(dist(apply_channel(replacement_channel(psi), rho).matrix(), ket_bra(psi, psi)) < 1e-14);
  }
}

TEST_CASE("property: channels preserve trace and positivity, dims up to 8") {
  Rng rng(53);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index d = std::uniform_int_distribution<Eigen::Index>(2, 8)(rng);
    const double p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const DensityOperator rho = random_density(d, rng, std::uniform_int_distribution<Eigen::Index>(1, d)(rng));
    // A random channel from an isometry: stack k Kraus operators of a d·k × d isometry.
    const Eigen::Index k = std::uniform_int_distribution<Eigen::Index>(1, 3)(rng);
    const ComplexMatrix iso = random_unitary(d * k, rng).leftCols(d);
    std::vector<ComplexMatrix> ops;
    for (Eigen::Index j = 0; j < k; ++j) ops.push_back(iso.middleRows(j * d, d));
    for (const KrausChannel& ch : {depolarizing_mixture(d, p), dephasing_mixture(d, p),
                                   KrausChannel(ops)}) {
      const auto out = apply_channel(ch, rho);
      CHECK(std::abs(out.matrix().trace().real() - 1.0) < 1e-10);
      CHECK(min_real_eigenvalue(out.matrix()) >= -1e-10);
    }
  }
}

TEST_CASE("evolve") {
  Rng rng(57);
  const DensityOperator rho = random_density(3, rng);
  CHECK(dist(evolve(UnitaryDynamics(identity(3)), rho).matrix(), rho.matrix()) < 1e-15);
  const auto h = evolve(UnitaryDynamics(hadamard()), dens(ket_bra(ket(2, 0), ket(2, 0))));
  CHECK(dist(h.matrix(), ket_bra(plus(), plus())) < 1e-15);
  const UnitaryDynamics u(random_unitary(3, rng));
  CHECK(dist(evolve(u, dens(identity(3) / 3.0)).matrix(), identity(3) / 3.0) < 1e-15);
}

TEST_CASE("property: evolution preserves the spectrum") {
  Rng rng(59);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index d = std::uniform_int_distribution<Eigen::Index>(2, 8)(rng);
    const DensityOperator rho = random_density(d, rng);
    const auto out = evolve(UnitaryDynamics(random_unitary(d, rng)), rho);
    CHECK((eigh(out.op()).values - eigh(rho.op()).values).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("run_pipeline") {
  Rng rng(61);
  const DensityOperator rho = random_density(3, rng);
  const UnitaryDynamics u(random_unitary(3, rng));
  const KrausChannel lam = dephasing_mixture(3, 0.4);
  CHECK(dist(run_pipeline({"empty", {}}, rho).matrix(), rho.matrix()) == 0.0);
  CHECK(dist(run_pipeline({"w", {u, lam}}, rho).matrix(),
             apply_channel(lam, evolve(u, rho)).matrix()) == 0.0);
  CHECK(error_of([&] { pipeline_output_dim({"bad", {partial_trace_channel(3, 2)}}, 3); }) ==
        ErrorCode::kDimensionMismatch);
  CHECK(pipeline_output_dim({"cg", {partial_trace_channel(3, 2)}}, 6) == 2);
}

TEST_CASE("qubit regression fixture") {
  const DensityOperator prior(fixture_prior());
  const AgentPipeline wanda{"Wanda", {depolarizing_mixture(2, 0.2)}};
  const AgentPipeline theo{"Theo", {UnitaryDynamics(hadamard()), dephasing_mixture(2, 0.5)}};
  CHECK(dist(run_pipeline(wanda, prior).matrix(), fixture_wanda_posterior()) < 1e-15);
  CHECK(dist(run_pipeline(theo, prior).matrix(), fixture_theo_posterior()) < 1e-15);

  const ScenarioResult r = run_scenario(config(fixture_prior(), wanda, theo));
  CHECK(r.verdict.compatible);
  // The two posteriors do not commute with each other through ρ⁻¹.
  CHECK_FALSE(r.pooling.has_value());
  REQUIRE(r.pooling_error.has_value());
  CHECK(r.pooling_error->code == ErrorCode::kNonHermitianProduct);
  REQUIRE(r.hermiticity_residual().has_value());
  CHECK(*r.hermiticity_residual() > 1e-3);
}

TEST_CASE("run_scenario") {
  Rng rng(67);
  SUBCASE("empty pipelines pool to the prior") {
    const ComplexMatrix prior = random_density(3, rng).matrix();
    const ScenarioResult r = run_scenario(config(prior, {"Wanda", {}}, {"Theo", {}}));
    CHECK(r.verdict.compatible);
    REQUIRE(r.pooling.has_value());
    CHECK(dist(r.pooling->pooled.matrix(), prior) < 1e-12);
  }
  SUBCASE("orthogonal pure outputs are incompatible") {
    const ScenarioResult r =
        run_scenario(config(random_density(2, rng).matrix(),
                            {"Wanda", {replacement_channel(ket(2, 0))}},
                            {"Theo", {replacement_channel(ket(2, 1))}}));
    CHECK_FALSE(r.verdict.compatible);
    CHECK_FALSE(r.pooling.has_value());
    CHECK_FALSE(r.pooling_error.has_value());
    CHECK_FALSE(r.hermiticity_residual().has_value());
  }
  SUBCASE("commuting diagonal scenario pools like the classical rule") {
    const auto p = random_simplex(3, rng);
    ComplexMatrix perm = ComplexMatrix::Zero(3, 3);
    perm(0, 1) = perm(1, 2) = perm(2, 0) = 1.0;
    const ScenarioResult r = run_scenario(config(
        diag(p), {"Wanda", {depolarizing_mixture(3, 0.3), dephasing_mixture(3, 0.5)}},
        {"Theo", {UnitaryDynamics(perm), depolarizing_mixture(3, 0.1)}}));
    REQUIRE(r.pooling.has_value());
    const auto q1 = diagonal(r.sigma1.matrix());
    const auto q2 = diagonal(r.sigma2.matrix());
    std::vector<double> expected(3);
    double z = 0.0;
    for (std::size_t y = 0; y < 3; ++y) z += expected[y] = q1[y] * q2[y] / p[y];
    for (double& e : expected) e /= z;
    CHECK(dist(r.pooling->pooled.matrix(), diag(expected)) < 1e-12);
  }
  SUBCASE("pooling against a coarse-grained reference") {
    const DensityOperator prior = random_density(6, rng);
    ScenarioConfig cfg{prior,
                       {AgentPipeline{"Wanda", {partial_trace_channel(3, 2)}},
                        AgentPipeline{"Theo", {partial_trace_channel(3, 2)}}},
                       AgentPipeline{"reference", {partial_trace_channel(3, 2)}},
                       {},
                       0};
    const ScenarioResult r = run_scenario(cfg);
    REQUIRE(r.pooling.has_value());
    CHECK(dist(r.pooling->pooled.matrix(), partial_trace(prior.matrix(), {3, 2}, {1})) < 1e-10);
  }
  SUBCASE("mismatched output dimensions are rejected") {
    const ScenarioConfig cfg = config(random_density(6, rng).matrix(),
                                      {"Wanda", {partial_trace_channel(3, 2)}}, {"Theo", {}});
    CHECK(error_of([&] { validate(cfg); }) == ErrorCode::kDimensionMismatch);
    CHECK(error_of([&] { run_scenario(cfg); }) == ErrorCode::kDimensionMismatch);
  }
}

TEST_CASE("random instances") {
  SUBCASE("same seed gives identical configurations") {
    for (auto kind : {InstanceKind::kRandom, InstanceKind::kOrthogonal, InstanceKind::kIdentical}) {
      const ScenarioConfig a = random_instance(3, 99, 0.2, kind);
      const ScenarioConfig b = random_instance(3, 99, 0.2, kind);
      CHECK(dist(a.prior.matrix(), b.prior.matrix()) == 0.0);
      for (std::size_t i = 0; i < 2; ++i) {
        CHECK(dist(run_pipeline(a.pipelines[i], a.prior).matrix(),
                   run_pipeline(b.pipelines[i], b.prior).matrix()) == 0.0);
      }
    }
  }
  SUBCASE("noiseless pipelines are unitary only") {
    const ScenarioConfig cfg = random_instance(4, 5, 0.0);
    for (const auto& p : cfg.pipelines) {
      CHECK_FALSE(p.steps.empty());
      for (const auto& step : p.steps) CHECK(std::holds_alternative<UnitaryDynamics>(step));
    }
  }
  SUBCASE("generated priors are valid states") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const ScenarioConfig cfg = random_instance(2, seed, 0.3);
      CHECK(std::abs(cfg.prior.matrix().trace().real() - 1.0) < 1e-10);
      CHECK(min_real_eigenvalue(cfg.prior.matrix()) >= -1e-10);
    }
  }
  SUBCASE("dimension below two") {
    CHECK(error_of([] { random_instance(1, 0, 0.0); }) == ErrorCode::kInvalidInput);
  }
  SUBCASE("unknown generator name") {
    CHECK(error_of([] { instance_kind_from_string("adversarial"); }) == ErrorCode::kInvalidInput);
    CHECK(instance_kind_from_string("orthogonal") == InstanceKind::kOrthogonal);
  }
}

TEST_CASE("property: every random instance yields a well-formed result") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    for (auto kind : {InstanceKind::kRandom, InstanceKind::kOrthogonal, InstanceKind::kIdentical}) {
      const std::size_t d = 2 + seed % 4;
      const double noise = double(seed % 5) / 4.0;
      ScenarioResult r = run_scenario(random_instance(d, seed, noise, kind));
      CHECK(!(r.pooling.has_value() && r.pooling_error.has_value()));
      if (!r.verdict.compatible) CHECK_FALSE(r.hermiticity_residual().has_value());
      if (kind == InstanceKind::kIdentical) {
        CHECK(r.verdict.compatible);
        REQUIRE(r.pooling.has_value());
        CHECK(r.pooling->hermiticity_residual <= 1e-10);
      }
      if (kind == InstanceKind::kOrthogonal) CHECK_FALSE(r.verdict.compatible);
    }
  }
}

TEST_CASE("batch report") {
  const BatchReport a = batch_report({2, 3}, 40, {0.0, 0.5}, 7);
  const BatchReport b = batch_report({2, 3}, 40, {0.0, 0.5}, 7, InstanceKind::kRandom, 4);
  REQUIRE(a.cells.size() == 4);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].compatible_fraction == b.cells[i].compatible_fraction);
    CHECK(a.cells[i].hermitian_fraction == b.cells[i].hermitian_fraction);
    CHECK(a.cells[i].mean_hermiticity_residual == b.cells[i].mean_hermiticity_residual);
    CHECK(a.cells[i].compatible_fraction == 1.0);
  }
  CHECK(a.cells[0].dim == 2);
  CHECK(a.cells[1].noise == 0.5);

  const BatchReport orth = batch_report({2, 4}, 30, {0.0}, 3, InstanceKind::kOrthogonal);
  for (const auto& cell : orth.cells) {
    CHECK(cell.compatible_fraction == 0.0);
    CHECK_FALSE(cell.mean_hermiticity_residual.has_value());
  }
  const BatchReport same = batch_report({3}, 30, {0.0, 0.4}, 3, InstanceKind::kIdentical);
  for (const auto& cell : same.cells) {
    CHECK(cell.pooled_fraction == 1.0);
    CHECK(cell.hermitian_fraction == 1.0);
  }
  CHECK(error_of([] { batch_report({2}, 0, {0.0}, 1); }) == ErrorCode::kInvalidInput);
}
