#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_support.hpp"

using namespace ts;

TEST_CASE("inner product on an explicit scalar example") {
  const AlgebraSpec spec = AlgebraSpec::scalar();
  ModuleVector x = ModuleVector::zero(spec, 2);
  x.entry(0).block(0)(0, 0) = cplx(1, 0);
  x.entry(1).block(0)(0, 0) = cplx(0, 2);
  // <x, x> = 1 * 1 + 2i * (2i)^* = 5
  CHECK(std::abs(inner_product(x, x).block(0)(0, 0) - cplx(5, 0)) < 1e-15);
  CHECK(x.norm() == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("inner product is A-linear in the first slot and hermitian") {
  Rng rng(21);
  const AlgebraSpec spec = m2_plus_c();
  for (int t = 0; t < 15; ++t) {
    const ModuleVector x = corpus::random_vector(rng, spec, 3);
    const ModuleVector y = corpus::random_vector(rng, spec, 3);
    const AlgebraElement a = corpus::random_element(rng, spec);
    CHECK((inner_product(a * x, y) - a * inner_product(x, y)).norm() < 1e-10);
    CHECK((inner_product(x, a * y) - inner_product(x, y) * a.adjoint()).norm() <
          1e-10);
    CHECK((inner_product(x, y).adjoint() - inner_product(y, x)).norm() < 1e-12);
    // positivity
    CHECK(is_positive(inner_product(x, x), 1e-10));
    // Cauchy-Schwarz in norm
    CHECK(inner_product(x, y).norm() <= x.norm() * y.norm() + 1e-9);
  }
}

TEST_CASE("unfolding is a faithful picture of vectors and operators") {
  Rng rng(22);
  const AlgebraSpec spec = m2_plus_c();
  for (int t = 0; t < 10; ++t) {
    const ModuleVector x = corpus::random_vector(rng, spec, 2);
    const ModuleVector y = corpus::random_vector(rng, spec, 2);
    const OperatorMatrix op = corpus::random_operator(rng, spec, 2, 3);

    // round trips
    const ModuleVector xr = refold_vector(unfold(x));
    CHECK((xr - x).norm() < 1e-14);
    const UnfoldedPicture opp = unfold(op);
    const OperatorMatrix opr = refold_operator(opp);
    CHECK((opr - op).norm() < 1e-14);

    // inner products become matrix products of the unfolded pictures
    const UnfoldedPicture xu = unfold(x);
    const UnfoldedPicture yu = unfold(y);
    const AlgebraElement g = inner_product(x, y);
    for (int s = 0; s < spec.num_blocks(); ++s) {
      const Mat want = xu.blocks[static_cast<size_t>(s)] *
                       yu.blocks[static_cast<size_t>(s)].adjoint();
      CHECK(dense::op_norm(g.block(s) - want) < 1e-12);
    }

    // the action unfolds to a matrix product as well
    const ModuleVector moved = apply(x, op);
    const UnfoldedPicture mu = unfold(moved);
    for (int s = 0; s < spec.num_blocks(); ++s) {
      const Mat want =
          xu.blocks[static_cast<size_t>(s)] * opp.blocks[static_cast<size_t>(s)];
      CHECK(dense::op_norm(mu.blocks[static_cast<size_t>(s)] - want) < 1e-12);
    }
  }
}

TEST_CASE("operator norm bounds the action") {
  Rng rng(23);
  const AlgebraSpec spec = m2_plus_c();
  for (int t = 0; t < 10; ++t) {
    const ModuleVector x = corpus::random_vector(rng, spec, 2);
    const OperatorMatrix op = corpus::random_operator(rng, spec, 2, 2);
    CHECK(apply(x, op).norm() <= op.norm() * x.norm() + 1e-9);
  }
}

TEST_CASE("span module contains its generators and is a valid projection") {
  Rng rng(24);
  const AlgebraSpec spec = m2_plus_c();
  for (int t = 0; t < 10; ++t) {
    const ModuleSpec m = corpus::random_module(rng, spec, 3);
    CHECK_NOTHROW(m.validate());
    REQUIRE(m.generators.has_value());
    for (const ModuleVector& g : *m.generators)
      CHECK((apply(g, m.projection) - g).norm() < 1e-9);
  }
}

TEST_CASE("rank vector agrees with the row-reduction oracle") {
  Rng rng(25);
  const AlgebraSpec spec = m2_plus_c();
  for (int t = 0; t < 10; ++t) {
    const ModuleSpec m = corpus::random_module(rng, spec, 3);
    const std::vector<int> ranks = rank_vector(m);
    const UnfoldedPicture pp = unfold(m.projection);
    for (int s = 0; s < spec.num_blocks(); ++s) {
      CHECK(ranks[static_cast<size_t>(s)] ==
            naive_rank(pp.blocks[static_cast<size_t>(s)]));
      CHECK(ranks[static_cast<size_t>(s)] ==
            static_cast<int>(
                std::lround(pp.blocks[static_cast<size_t>(s)].trace().real())));
    }
  }
}

TEST_CASE("free module dimensions") {
  const AlgebraSpec spec = m2_plus_c();
  const ModuleSpec free3 = free_module(spec, 3);
  const std::vector<int> ranks = rank_vector(free3);
  CHECK(ranks == std::vector<int>{6, 3});
  const CenterElement dim = center_valued_dimension(free3);
  CHECK(std::abs(dim.scalars[0] - cplx(3, 0)) < 1e-14);
  CHECK(std::abs(dim.scalars[1] - cplx(3, 0)) < 1e-14);
  CHECK(scalar_dimension(free3) == doctest::Approx(3.0));
}

TEST_CASE("canonical decomposition of a module with known ranks") {
  // ranks (3, 2) over M2 + C: two summands with projection ranks (2,1), (1,1)
  const AlgebraSpec spec = m2_plus_c();
  const ModuleSpec m = diagonal_module(spec, 2, {3, 2});
  const CanonicalDecomposition dec = canonical_decomposition(m);
  REQUIRE(dec.projections.size() == 2);
  CHECK(block_ranks(dec.projections[0]) == std::vector<int>{2, 1});
  CHECK(block_ranks(dec.projections[1]) == std::vector<int>{1, 1});

  // the standard module is diag(p_i) and the transport is unitary
  CHECK((dec.to_standard * dec.to_standard.adjoint() - m.projection).norm() < 1e-10);
  CHECK((dec.to_standard.adjoint() * dec.to_standard - dec.standard.projection)
            .norm() < 1e-10);
  CHECK(is_isomorphic(m, dec.standard));

  // transport preserves inner products
  Rng rng(26);
  for (int t = 0; t < 5; ++t) {
    ModuleVector x = corpus::random_vector(rng, spec, 2);
    ModuleVector y = corpus::random_vector(rng, spec, 2);
    x = apply(x, m.projection);
    y = apply(y, m.projection);
    const ModuleVector xs = apply(x, dec.to_standard);
    const ModuleVector ys = apply(y, dec.to_standard);
    CHECK((inner_product(xs, ys) - inner_product(x, y)).norm() < 1e-10);
  }
}

TEST_CASE("canonical decomposition on random modules") {
  Rng rng(27);
  for (int t = 0; t < 8; ++t) {
    const AlgebraSpec spec = corpus::random_algebra(rng, 5);
    const ModuleSpec m = corpus::random_module(rng, spec, 3);
    const CanonicalDecomposition dec = canonical_decomposition(m);
    CHECK((dec.to_standard * dec.to_standard.adjoint() - m.projection).norm() < 1e-9);
    CHECK((dec.to_standard.adjoint() * dec.to_standard - dec.standard.projection)
              .norm() < 1e-9);
    CHECK(rank_vector(dec.standard) == rank_vector(m));
    // summand count: least k with r_s <= k n_s for every block
    const std::vector<int> ranks = rank_vector(m);
    int want = 0;
    for (int s = 0; s < spec.num_blocks(); ++s) {
      const int k = (ranks[static_cast<size_t>(s)] + spec.block_size(s) - 1) /
                    spec.block_size(s);
      want = std::max(want, k);
    }
    CHECK(static_cast<int>(dec.projections.size()) == want);
  }
}

TEST_CASE("corner modules of the full matrix algebra are isomorphic") {
  const AlgebraSpec spec = m2_half();
  std::vector<ModuleVector> g1;
  ModuleVector v1 = ModuleVector::zero(spec, 1);
  v1.entry(0) = AlgebraElement::matrix_unit(spec, 0, 0, 0);
  g1.push_back(v1);
  std::vector<ModuleVector> g2;
  ModuleVector v2 = ModuleVector::zero(spec, 1);
  v2.entry(0) = AlgebraElement::matrix_unit(spec, 0, 1, 1);
  g2.push_back(v2);

  const ModuleSpec m = span_module(spec, 1, g1);
  const ModuleSpec n = span_module(spec, 1, g2);
  CHECK(rank_vector(m) == std::vector<int>{1});
  CHECK(is_isomorphic(m, n));
  const OperatorMatrix v = build_unitary_isomorphism(m, n);
  CHECK((v * v.adjoint() - m.projection).norm() < 1e-10);
  CHECK((v.adjoint() * v - n.projection).norm() < 1e-10);
}

TEST_CASE("non-isomorphic modules are refused a unitary") {
  const AlgebraSpec spec = m2_plus_c();
  const ModuleSpec m = diagonal_module(spec, 2, {3, 2});
  const ModuleSpec n = diagonal_module(spec, 2, {2, 2});
  CHECK_FALSE(is_isomorphic(m, n));
  CHECK_THROWS_AS(build_unitary_isomorphism(m, n), PreconditionError);
  // different algebras cannot be compared at all
  const ModuleSpec other = free_module(m2_half(), 2);
  CHECK_THROWS_AS(is_isomorphic(m, other), ShapeError);
}

TEST_CASE("zero module conventions") {
  const AlgebraSpec spec = m2_plus_c();
  const ModuleSpec zero = span_module(spec, 2, {});
  CHECK(rank_vector(zero) == std::vector<int>{0, 0});
  CHECK(scalar_dimension(zero) == 0.0);
  const CanonicalDecomposition dec = canonical_decomposition(zero);
  CHECK(dec.projections.empty());
  CHECK(rank_vector(dec.standard) == std::vector<int>{0, 0});
  CHECK(is_isomorphic(zero, dec.standard));
}

TEST_CASE("dimension additivity under direct sums") {
  Rng rng(28);
  const AlgebraSpec spec = m2_plus_c();
  const ModuleSpec m = corpus::random_module(rng, spec, 2);
  const ModuleSpec n = corpus::random_module(rng, spec, 3);

  // block-diagonal sum inside a wider ambient module
  const int ambient = m.ambient_rank + n.ambient_rank;
  OperatorMatrix p = OperatorMatrix::zero(spec, ambient, ambient);
  for (int i = 0; i < m.ambient_rank; ++i)
    for (int j = 0; j < m.ambient_rank; ++j) p.entry(i, j) = m.projection.entry(i, j);
  for (int i = 0; i < n.ambient_rank; ++i)
    for (int j = 0; j < n.ambient_rank; ++j)
      p.entry(m.ambient_rank + i, m.ambient_rank + j) = n.projection.entry(i, j);
  const ModuleSpec sum{spec, ambient, p, std::nullopt};
  sum.validate();

  CHECK(scalar_dimension(sum) ==
        doctest::Approx(scalar_dimension(m) + scalar_dimension(n)).epsilon(1e-12));
  const std::vector<int> rm = rank_vector(m);
  const std::vector<int> rn = rank_vector(n);
  const std::vector<int> rs = rank_vector(sum);
  for (size_t s = 0; s < rs.size(); ++s)
    CHECK(rs[s] == rm[s] + rn[s]);
}

TEST_CASE("module validation rejects malformed specs") {
  const AlgebraSpec spec = m2_plus_c();
  // not idempotent
  OperatorMatrix nearly = OperatorMatrix::identity(spec, 2);
  nearly.entry(0, 1) = 0.5 * AlgebraElement::identity(spec);
  const ModuleSpec bad{spec, 2, nearly, std::nullopt};
  CHECK_THROWS_AS(bad.validate(), InputError);

  // generator outside the claimed module
  ModuleSpec m = diagonal_module(spec, 2, {1, 1});
  ModuleVector outside = ModuleVector::zero(spec, 2);
  outside.entry(1) = AlgebraElement::identity(spec);
  m.generators = std::vector<ModuleVector>{outside};
  CHECK_THROWS_AS(m.validate(), InputError);
}
