#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_support.hpp"

using namespace ts;

namespace {

ModuleSpec guarded_module(Rng& rng) {
  const AlgebraSpec spec = corpus::small_algebra(rng);
  return corpus::random_module(rng, spec, 1 + static_cast<int>(rng.uniform_int(0, 1)));
}

}  // namespace

TEST_CASE("scalarization of the free rank-one module over a matrix block") {
  const AlgebraSpec spec = m2_half();
  const ModuleSpec m = free_module(spec, 1);
  const HilbertianModel h = scalarize(m);

  CHECK(h.complex_dimension == 4);
  CHECK(static_cast<int>(h.basis.size()) == 4);
  // the reduced basis is orthogonal with squared lengths the trace weights
  CHECK(dense::op_norm(h.basis_gram - 0.5 * Mat::Identity(4, 4)) < 1e-12);
  // the spanning family sees the same dimension
  CHECK(naive_rank(h.spanning_gram) == 4);
  CHECK(static_cast<int>(h.unit_actions.size()) == 4);
  for (const Mat& act : h.unit_actions) {
    CHECK(act.rows() == 4);
    CHECK(act.cols() == 4);
  }
}

TEST_CASE("scalarized dimension counts complex dimensions blockwise") {
  Rng rng(41);
  for (int t = 0; t < 6; ++t) {
    const ModuleSpec m = guarded_module(rng);
    const HilbertianModel h = scalarize(m);
    const std::vector<int> ranks = rank_vector(m);
    int want = 0;
    for (int s = 0; s < m.algebra.num_blocks(); ++s)
      want += m.algebra.block_size(s) * ranks[static_cast<size_t>(s)];
    CHECK(h.complex_dimension == want);
    CHECK(naive_rank(h.spanning_gram) == want);
  }
}

TEST_CASE("inner products are recoverable from scalar data") {
  Rng rng(42);
  for (int t = 0; t < 6; ++t) {
    const ModuleSpec m = guarded_module(rng);
    const HilbertianModel h = scalarize(m);
    for (int probe = 0; probe < 4; ++probe) {
      ModuleVector x = corpus::random_vector(rng, m.algebra, m.ambient_rank);
      ModuleVector y = corpus::random_vector(rng, m.algebra, m.ambient_rank);
      x = apply(x, m.projection);
      y = apply(y, m.projection);
      const Eigen::VectorXcd xc = scalar_coordinates(h, x);
      const Eigen::VectorXcd yc = scalar_coordinates(h, y);

      // coordinates reproduce the vector
      ModuleVector rebuilt = ModuleVector::zero(m.algebra, m.ambient_rank);
      for (int i = 0; i < h.complex_dimension; ++i)
        rebuilt += cplx(xc(i)) * h.basis[static_cast<size_t>(i)];
      CHECK((rebuilt - x).norm() < 1e-9);

      // and the algebra-valued inner product survives scalarization
      const AlgebraElement direct = inner_product(x, y);
      const AlgebraElement recovered = gram_from_scalar_data(h, xc, yc);
      CHECK((direct - recovered).norm() < 1e-9);
    }
  }
}

TEST_CASE("scalarized operators act consistently and respect adjoints") {
  Rng rng(43);
  for (int t = 0; t < 6; ++t) {
    const ModuleSpec m = guarded_module(rng);
    const HilbertianModel h = scalarize(m);
    OperatorMatrix op = corpus::random_operator(rng, m.algebra, m.ambient_rank,
                                                m.ambient_rank);
    op = m.projection * op * m.projection;
    const Mat mat = scalar_matrix(h, op);

    for (int probe = 0; probe < 3; ++probe) {
      ModuleVector x = corpus::random_vector(rng, m.algebra, m.ambient_rank);
      x = apply(x, m.projection);
      const Eigen::VectorXcd moved = scalar_coordinates(h, apply(x, op));
      const Eigen::VectorXcd routed = mat * scalar_coordinates(h, x);
      CHECK((moved - routed).norm() < 1e-8);
    }

    CHECK(adjoint_consistency_residual(m, op) < 1e-9);

    // block-diagonal scalar picture: operator norms agree between routes
    CHECK(dense::op_norm(mat) == doctest::Approx(op.norm()).epsilon(1e-8));
  }
}

TEST_CASE("commutant dimensions for the free module over a matrix block") {
  const ModuleSpec m = free_module(m2_half(), 1);
  const CommutantReport rep = commutant_check(m);
  CHECK(rep.pass);
  CHECK(rep.commutant_dim == 4);
  CHECK(rep.bicommutant_dim == 4);
  CHECK(rep.expected_commutant_dim == 4);
  CHECK(rep.expected_bicommutant_dim == 4);
}

TEST_CASE("commutant dimensions for a rank-deficient module over the diagonal") {
  const AlgebraSpec spec = c_plus_c();
  const ModuleSpec m = diagonal_module(spec, 1, {1, 0});
  const CommutantReport rep = commutant_check(m);
  CHECK(rep.pass);
  CHECK(rep.commutant_dim == 1);
  CHECK(rep.bicommutant_dim == 1);
  CHECK(rep.block_commutant_dims == std::vector<int>{1, 0});
}

TEST_CASE("commutant of the zero module is trivial") {
  const AlgebraSpec spec = c_plus_c();
  const ModuleSpec zero = span_module(spec, 1, {});
  const CommutantReport rep = commutant_check(zero);
  CHECK(rep.pass);
  CHECK(rep.commutant_dim == 0);
  CHECK(rep.bicommutant_dim == 0);
}

TEST_CASE("commutant dimensions match the predicted counts on random modules") {
  Rng rng(44);
  for (int t = 0; t < 5; ++t) {
    const ModuleSpec m = guarded_module(rng);
    const CommutantReport rep = commutant_check(m);
    CHECK(rep.pass);
    const std::vector<int> ranks = rank_vector(m);
    int want_comm = 0, want_bicomm = 0;
    for (int s = 0; s < m.algebra.num_blocks(); ++s) {
      const int r = ranks[static_cast<size_t>(s)];
      want_comm += r * r;
      if (r > 0) want_bicomm += m.algebra.block_size(s) * m.algebra.block_size(s);
    }
    CHECK(rep.commutant_dim == want_comm);
    CHECK(rep.bicommutant_dim == want_bicomm);
  }
}

TEST_CASE("commutant computation refuses oversized inputs") {
  const AlgebraSpec big = AlgebraSpec::with_uniform_weights({4, 3});
  CHECK_THROWS_AS(commutant_check(free_module(big, 2)), InputError);
  const AlgebraSpec wide = AlgebraSpec::scalar();
  CHECK_THROWS_AS(commutant_check(free_module(wide, 5)), InputError);
}

TEST_CASE("linking operator carries one modified inner product to the other") {
  Rng rng(45);
  for (int t = 0; t < 6; ++t) {
    const AlgebraSpec spec = corpus::random_algebra(rng, 5);
    const ModuleSpec m = corpus::random_module(rng, spec, 3);
    const InnerProductForm g1{corpus::random_positive_form(rng, m)};
    const InnerProductForm g2{corpus::random_positive_form(rng, m)};
    g1.validate(m);
    g2.validate(m);

    const OperatorMatrix link = link_inner_products(m, g1, g2);
    CHECK(linking_residual(m, link, g1, g2) < 1e-8);
    CHECK((link * g2.g * link - g1.g).norm() < 1e-8);

    // T is positive and lives on the module
    CHECK((link.adjoint() - link).norm() < 1e-8);
    CHECK((m.projection * link * m.projection - link).norm() < 1e-8);

    // equal forms are linked by the projection itself
    const OperatorMatrix self_link = link_inner_products(m, g1, g1);
    CHECK((self_link - m.projection).norm() < 1e-8);
  }
}

TEST_CASE("inner product forms are validated") {
  Rng rng(46);
  const AlgebraSpec spec = m2_plus_c();
  const ModuleSpec m = diagonal_module(spec, 2, {2, 1});

  // not positive on the module
  OperatorMatrix neg = cplx(-1, 0) * m.projection;
  CHECK_THROWS_AS(InnerProductForm{neg}.validate(m), PreconditionError);

  // not compressed to the module
  OperatorMatrix loose = OperatorMatrix::identity(spec, 2);
  if ((m.projection * loose * m.projection - loose).norm() > 1e-6)
    CHECK_THROWS_AS(InnerProductForm{loose}.validate(m), InputError);

  // a genuine form passes
  const OperatorMatrix good = corpus::random_positive_form(rng, m);
  CHECK_NOTHROW(InnerProductForm{good}.validate(m));
}

TEST_CASE("dimensions are invariant under isometric re-embeddings") {
  Rng rng(47);
  for (int t = 0; t < 4; ++t) {
    const AlgebraSpec spec = corpus::random_algebra(rng, 5);
    const ModuleSpec m = corpus::random_module(rng, spec, 3);
    const InvarianceReport rep = embedding_invariance(m, 10, 1 + t);
    CHECK(rep.pass);
    CHECK(rep.trials == 10);
    CHECK(rep.max_scalar_deviation < 1e-10);
    CHECK(rep.max_center_deviation < 1e-10);

    // the same fact checked directly with an independent isometry
    const OperatorMatrix w =
        random_isometry(rng, spec, m.ambient_rank, m.ambient_rank + 2);
    const ModuleSpec wider = embed_module(m, w);
    wider.validate();
    CHECK(rank_vector(wider) == rank_vector(m));
    CHECK(scalar_dimension(wider) ==
          doctest::Approx(scalar_dimension(m)).epsilon(1e-12));
  }
}
