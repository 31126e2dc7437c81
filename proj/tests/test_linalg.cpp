#include "doctest.h"
#include "support.hpp"

using namespace qagree;
using namespace qagree::testing;

TEST_CASE("tensor: identity and diagonal products") {
  CHECK(dist(tensor(identity(2), identity(2)), identity(4)) == 0.0);
  CHECK(dist(tensor(diag({1, 2}), diag({3, 4})), diag({3, 4, 6, 8})) == 0.0);
}

TEST_CASE("tensor: |0><0| x |1><1| has its single one at (1,1)") {
  const ComplexMatrix p0 = ket_bra(ket(2, 0), ket(2, 0));
  const ComplexMatrix p1 = ket_bra(ket(2, 1), ket(2, 1));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(1, 1) = 1.0;
  CHECK(dist(tensor(p0, p1), expected) == 0.0);
}

TEST_CASE("tensor matches index-arithmetic Kronecker on random rectangles") {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    std::uniform_int_distribution<int> d(1, 4);
    const ComplexMatrix a = random_gaussian(d(rng), d(rng), rng);
    const ComplexMatrix b = random_gaussian(d(rng), d(rng), rng);
    CHECK(dist(tensor(a, b), kron_oracle(a, b)) == 0.0);
  }
}

TEST_CASE("partial trace") {
  Rng rng(3);
  const auto ra = random_density(3, rng).matrix();
  const auto rb = random_density(2, rng).matrix();
  const ComplexMatrix prod = tensor(ra, rb);

  SUBCASE("product state keeps each factor") {
    CHECK(dist(partial_trace(prod, {3, 2}, {0}), ra) < 1e-14);
    CHECK(dist(partial_trace(prod, {3, 2}, {1}), rb) < 1e-14);
  }
  SUBCASE("Bell state marginal is maximally mixed") {
    ComplexVector phi = ComplexVector::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    CHECK(dist(partial_trace(ket_bra(phi, phi), {2, 2}, {0}), identity(2) / 2.0) < 1e-15);
  }
  SUBCASE("keeping everything is the identity") {
    CHECK(dist(partial_trace(prod, {6}, {0}), prod) == 0.0);
    CHECK(dist(partial_trace(prod, {3, 2}, {0, 1}), prod) == 0.0);
  }
  SUBCASE("keeping nothing gives the trace") {
    const ComplexMatrix t = partial_trace(prod, {3, 2}, {});
    REQUIRE(t.rows() == 1);
    CHECK(std::abs(t(0, 0) - prod.trace()) < 1e-14);
  }
  SUBCASE("dimension mismatch") {
    CHECK(error_of([&] { partial_trace(prod, {2, 2}, {0}); }) == ErrorCode::kDimensionMismatch);
  }
}

TEST_CASE("partial trace agrees with direct summation on random operators") {
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    std::uniform_int_distribution<int> d(1, 4);
    const int da = d(rng);
    const int db = d(rng);
    const ComplexMatrix m = random_gaussian(da * db, da * db, rng);
    CHECK(dist(partial_trace(m, {std::size_t(da), std::size_t(db)}, {0}),
               trace_second_oracle(m, da, db)) < 1e-12);
    CHECK(dist(partial_trace(m, {std::size_t(da), std::size_t(db)}, {1}),
               trace_first_oracle(m, da, db)) < 1e-12);
  }
}

TEST_CASE("partial trace over three factors keeps order") {
  Rng rng(8);
  const auto a = random_density(2, rng).matrix();
  const auto b = random_density(3, rng).matrix();
  const auto c = random_density(2, rng).matrix();
  const ComplexMatrix abc = tensor(tensor(a, b), c);
  CHECK(dist(partial_trace(abc, {2, 3, 2}, {0, 2}), tensor(a, c)) < 1e-14);
  CHECK(dist(partial_trace(abc, {2, 3, 2}, {1}), b) < 1e-14);
}

TEST_CASE("embed places the operator on the listed factors") {
  Rng rng(9);
  const ComplexMatrix op = random_gaussian(3, 3, rng);
  CHECK(dist(embed(op, {2, 3}, {1}), tensor(identity(2), op)) == 0.0);
  CHECK(dist(embed(op, {3, 2}, {0}), tensor(op, identity(2))) == 0.0);
  const ComplexMatrix a = random_gaussian(2, 2, rng);
  const ComplexMatrix c = random_gaussian(2, 2, rng);
  const ComplexMatrix split = tensor(a, c);
  CHECK(dist(embed(split, {2, 3, 2}, {0, 2}), tensor(tensor(a, identity(3)), c)) < 1e-14);
}

TEST_CASE("Hermitian construction") {
  CHECK(error_of([] { HermitianOperator(mat({{1.0, 1.0}, {0.0, 1.0}})); }) ==
        ErrorCode::kNotHermitian);
  CHECK(error_of([] { HermitianOperator(ComplexMatrix::Zero(2, 3)); }) ==
        ErrorCode::kInvalidInput);
  const HermitianOperator h(mat({{1.0, 2.0 + 1e-12i}, {2.0, 3.0}}));
  CHECK(hermiticity_residual(h.matrix()) == 0.0);
}

TEST_CASE("density construction") {
  CHECK(error_of([] { DensityOperator(diag({0.5, 0.6})); }) == ErrorCode::kNotNormalized);
  CHECK(error_of([] { DensityOperator(diag({1.5, -0.5})); }) == ErrorCode::kNotPsd);
  const DensityOperator clamped(diag({1.0 + 1e-12, -1e-12}));
  CHECK(eigh(clamped.op()).values.minCoeff() >= 0.0);
}

TEST_CASE("support") {
  CHECK(support(herm(ket_bra(ket(2, 0), ket(2, 0)))).rank() == 1);
  CHECK(dist(support(herm(ket_bra(ket(2, 0), ket(2, 0)))).projector(),
             ket_bra(ket(2, 0), ket(2, 0))) < 1e-15);
  CHECK(support(herm(identity(2) / 2.0)).rank() == 2);
  CHECK(support(herm(diag({1.0, 1e-15})), 1e-10).rank() == 1);
  CHECK(support(herm(ComplexMatrix::Zero(3, 3))).is_empty());
  // Relative threshold: scaling does not change the rank.
  CHECK(support(herm(diag({1e-20, 1e-35}))).rank() == 1);
}

TEST_CASE("square root") {
  CHECK(dist(sqrt_psd(herm(identity(3))).matrix(), identity(3)) < 1e-15);
  CHECK(dist(sqrt_psd(herm(diag({4, 9}))).matrix(), diag({2, 3})) < 1e-15);

  // Eigenvalues 1 and 1/4 on (1,1)/√2 and (1,-1)/√2, so the root is
  // (1·P₊ + ½·P₋) = ((3/4, 1/4), (1/4, 3/4)).
  const ComplexMatrix m = mat({{5.0, 3.0}, {3.0, 5.0}}) / 8.0;
  const ComplexMatrix r = sqrt_psd(herm(m)).matrix();
  CHECK(dist(r, mat({{0.75, 0.25}, {0.25, 0.75}})) < 1e-15);
  CHECK(dist(r * r, m) < 1e-12);

  CHECK(error_of([] { sqrt_psd(herm(diag({1.0, -0.1}))); }) == ErrorCode::kNotPsd);
}

TEST_CASE("pseudo-inverse") {
  CHECK(dist(pseudo_inverse(herm(diag({2, 0}))).matrix(), diag({0.5, 0})) < 1e-15);
  CHECK(dist(pseudo_inverse(herm(identity(3))).matrix(), identity(3)) < 1e-15);
}

TEST_CASE("intersection") {
  const Subspace zero(2, ket(2, 0));
  const Subspace one(2, ket(2, 1));
  CHECK(intersect(zero, one).is_empty());
  const Subspace both = intersect(zero, Subspace::full(2));
  REQUIRE(both.rank() == 1);
  CHECK(dist(both.projector(), ket_bra(ket(2, 0), ket(2, 0))) < 1e-12);
  CHECK(intersect(zero, Subspace(2, plus())).is_empty());
  CHECK(intersect(Subspace::empty(3), Subspace::full(3)).is_empty());
}

TEST_CASE("property: spectral functions on random Hermitian operators, dims up to 16") {
  Rng rng(2024);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index d = std::uniform_int_distribution<Eigen::Index>(1, 16)(rng);
    const Eigen::Index rank = std::uniform_int_distribution<Eigen::Index>(1, d)(rng);
    const DensityOperator rho = random_density(d, rng, rank);
    const ComplexMatrix& m = rho.matrix();
    CAPTURE(d);
    CAPTURE(rank);

    CHECK(support(rho.op()).rank() == rank);

    const ComplexMatrix r = sqrt_psd(rho.op()).matrix();
    CHECK(dist(r * r, m) < 1e-12);
    CHECK(min_real_eigenvalue(r) > -1e-12);

    const ComplexMatrix p = pseudo_inverse(rho.op()).matrix();
    const double scale = max_abs(p);
    CHECK(dist(p * m * p, p) <= 1e-9 * std::max(1.0, scale));
    CHECK(dist(m * p * m, m) < 1e-10);
    CHECK(hermiticity_residual(m * p) < 1e-9);

    const HermitianOperator h = random_hermitian(d, rng);
    const auto spec = eigh(h);
    CHECK(dist(spec.vectors * spec.values.cast<Complex>().asDiagonal() * spec.vectors.adjoint(),
               h.matrix()) < 1e-10);
  }
}

TEST_CASE("property: intersection of random subspaces") {
  Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index d = std::uniform_int_distribution<Eigen::Index>(2, 8)(rng);
    const ComplexMatrix u = random_unitary(d, rng);
    // Share the first k columns; fill the rest with independent directions.
    const Eigen::Index k = std::uniform_int_distribution<Eigen::Index>(0, d / 2)(rng);
    const Eigen::Index extra = (d - 2 * k) / 2;
    ComplexMatrix a(d, k + extra);
    ComplexMatrix b(d, k + extra);
    a << u.leftCols(k), u.middleCols(k, extra);
    b << u.leftCols(k), u.middleCols(k + extra, extra);
    const Subspace s = intersect(Subspace(d, a), Subspace(d, b));
    CAPTURE(d);
    CHECK(s.rank() == k);
    if (k > 0) {
      const ComplexMatrix shared = u.leftCols(k) * u.leftCols(k).adjoint();
      CHECK(dist(s.projector(), shared) < 1e-10);
    }
  }
}
