#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_support.hpp"

using namespace ts;

namespace {

// Three unit vectors at 120 degree spacing in the plane, over the scalars.
FrameSet mercedes_frame() {
  const AlgebraSpec spec = AlgebraSpec::scalar();
  std::vector<ModuleVector> elems;
  for (int k = 0; k < 3; ++k) {
    const double th = 2.0 * M_PI * k / 3.0;
    ModuleVector v = ModuleVector::zero(spec, 2);
    v.entry(0).block(0)(0, 0) = std::cos(th);
    v.entry(1).block(0)(0, 0) = std::sin(th);
    elems.push_back(v);
  }
  return FrameSet{free_module(spec, 2), std::move(elems)};
}

FrameSet random_test_frame(Rng& rng) {
  const AlgebraSpec spec = corpus::random_algebra(rng, 5);
  const ModuleSpec m = corpus::random_module(rng, spec, 3);
  return corpus::random_frame(rng, m, 4 + static_cast<int>(rng.uniform_int(0, 2)));
}

}  // namespace

TEST_CASE("frame operator of the plane frame at 120 degree spacing") {
  const FrameSet f = mercedes_frame();
  f.validate();
  const OperatorMatrix s = frame_operator(f);
  const OperatorMatrix want = cplx(1.5, 0) * OperatorMatrix::identity(f.module.algebra, 2);
  CHECK((s - want).norm() < 1e-12);
  const FrameBounds b = frame_bounds(f);
  CHECK(b.lower == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(b.upper == doctest::Approx(1.5).epsilon(1e-10));
  CHECK_FALSE(is_normalized_tight(f));
  CHECK(is_normalized_tight(canonical_tight(f)));
}

TEST_CASE("repeated basis vector over the scalars") {
  const AlgebraSpec spec = AlgebraSpec::scalar();
  const ModuleVector e1 = ModuleVector::basis(spec, 1, 0);
  const FrameSet f{free_module(spec, 1), {e1, e1}};
  f.validate();

  const OperatorMatrix s = frame_operator(f);
  CHECK(std::abs(s.entry(0, 0).block(0)(0, 0) - cplx(2, 0)) < 1e-14);

  const FrameSet tight = canonical_tight(f);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(tight.elements[static_cast<size_t>(i)].entry(0).block(0)(0, 0) -
                   cplx(inv_sqrt2, 0)) < 1e-12);

  const OperatorMatrix g = retightening_form(f);
  CHECK(std::abs(g.entry(0, 0).block(0)(0, 0) - cplx(0.5, 0)) < 1e-12);
}

TEST_CASE("frame bounds squeeze the generalized frame inequality") {
  Rng rng(31);
  for (int t = 0; t < 8; ++t) {
    const FrameSet f = random_test_frame(rng);
    const FrameBounds b = frame_bounds(f);
    REQUIRE(b.lower > 0.0);
    for (int probe = 0; probe < 5; ++probe) {
      ModuleVector x = corpus::random_vector(rng, f.module.algebra, f.module.ambient_rank);
      x = apply(x, f.module.projection);
      // the sum is computed term by term, independent of the frame operator
      AlgebraElement ssum = AlgebraElement::zero(f.module.algebra);
      for (const ModuleVector& e : f.elements)
        ssum += inner_product(x, e) * inner_product(e, x);
      const AlgebraElement xx = inner_product(x, x);
      CHECK(is_positive(ssum - cplx(b.lower, 0) * xx, 1e-8));
      CHECK(is_positive(cplx(b.upper, 0) * xx - ssum, 1e-8));
    }
  }
}

TEST_CASE("canonical tight frame reconstructs every module vector") {
  Rng rng(32);
  for (int t = 0; t < 8; ++t) {
    const FrameSet f = random_test_frame(rng);
    const FrameSet tight = canonical_tight(f);
    CHECK(is_normalized_tight(tight, 1e-9));
    CHECK(tight.size() == f.size());
    for (int probe = 0; probe < 4; ++probe) {
      ModuleVector x =
          corpus::random_vector(rng, f.module.algebra, f.module.ambient_rank);
      x = apply(x, f.module.projection);
      CHECK((reconstruct(tight, x) - x).norm() < 1e-9 * std::max(1.0, x.norm()));
    }
  }
}

TEST_CASE("retightening form makes the original elements tight") {
  Rng rng(33);
  for (int t = 0; t < 8; ++t) {
    const FrameSet f = random_test_frame(rng);
    const OperatorMatrix g = retightening_form(f);

    std::vector<ModuleVector> probes;
    for (int probe = 0; probe < 3; ++probe) {
      ModuleVector x =
          corpus::random_vector(rng, f.module.algebra, f.module.ambient_rank);
      probes.push_back(apply(x, f.module.projection));
    }
    CHECK(retightening_residual(f, g, probes) < 1e-9);

    // any hermitian perturbation supported on the module breaks the identity
    OperatorMatrix q = corpus::random_operator(rng, f.module.algebra,
                                               f.module.ambient_rank,
                                               f.module.ambient_rank);
    q = f.module.projection * (q + q.adjoint()) * f.module.projection;
    if (q.norm() < 1e-6) continue;
    q = cplx(1.0 / q.norm(), 0) * q;
    const double eps = 1e-3;
    const OperatorMatrix bad = g + cplx(eps, 0) * q;
    CHECK(retightening_residual(f, bad, probes) > 1e-2 * eps);
  }
}

TEST_CASE("isometric re-embedding preserves Gram matrices exactly") {
  Rng rng(34);
  for (int t = 0; t < 6; ++t) {
    const FrameSet f = canonical_tight(random_test_frame(rng));
    const ModuleSpec& m = f.module;
    const OperatorMatrix w =
        random_isometry(rng, m.algebra, m.ambient_rank, m.ambient_rank + 1);
    std::vector<ModuleVector> carried;
    for (const ModuleVector& e : f.elements) carried.push_back(apply(e, w));
    const FrameSet g{embed_module(m, w), std::move(carried)};
    g.module.validate();
    CHECK(frames_equal_gram(f, g, 1e-10));
    CHECK(is_normalized_tight(g, 1e-9));

    // matched tight frames are carried onto each other by a unitary
    const OperatorMatrix v = unitary_from_matched_frames(f, g, 1e-8);
    CHECK((v * v.adjoint() - f.module.projection).norm() < 1e-8);
    CHECK((v.adjoint() * v - g.module.projection).norm() < 1e-8);
    for (int i = 0; i < f.size(); ++i)
      CHECK((apply(f.elements[static_cast<size_t>(i)], v) -
             g.elements[static_cast<size_t>(i)])
                .norm() < 1e-8);
  }
}

TEST_CASE("mismatched frames are refused a unitary") {
  Rng rng(35);
  const FrameSet f = canonical_tight(random_test_frame(rng));

  // different lengths
  FrameSet longer = f;
  longer.elements.push_back(f.elements[0]);
  CHECK_THROWS_AS(unitary_from_matched_frames(f, longer), PreconditionError);

  // not normalized tight
  FrameSet scaled = f;
  for (ModuleVector& e : scaled.elements) e = cplx(2, 0) * e;
  CHECK_FALSE(is_normalized_tight(scaled));
  CHECK_THROWS_AS(unitary_from_matched_frames(scaled, scaled), PreconditionError);
}

TEST_CASE("riesz property distinguishes bases from overcomplete frames") {
  Rng rng(36);
  for (int t = 0; t < 6; ++t) {
    const AlgebraSpec spec = corpus::random_algebra(rng, 5);
    ModuleSpec m = corpus::random_module(rng, spec, 3);
    auto [x_basis, y_basis] = corpus::random_riesz_pair(rng, m);
    CHECK(is_riesz_basis(x_basis));
    CHECK(is_riesz_basis(y_basis));

    // doubling an element always destroys the property
    FrameSet overcomplete = x_basis;
    overcomplete.elements.push_back(x_basis.elements[0]);
    if (rank_vector(m) != std::vector<int>(rank_vector(m).size(), 0))
      CHECK_FALSE(is_riesz_basis(overcomplete));
  }
}

TEST_CASE("transfer matrices between Riesz bases multiply to support diagonals") {
  Rng rng(37);
  for (int t = 0; t < 6; ++t) {
    const AlgebraSpec spec = corpus::random_algebra(rng, 5);
    const ModuleSpec m = corpus::random_module(rng, spec, 3);
    auto [x_basis, y_basis] = corpus::random_riesz_pair(rng, m);
    const TransferMatrices tm = transfer_matrices(x_basis, y_basis);

    // C reproduces the second basis from the first
    for (int i = 0; i < y_basis.size(); ++i) {
      ModuleVector rebuilt = ModuleVector::zero(spec, m.ambient_rank);
      for (int j = 0; j < x_basis.size(); ++j)
        rebuilt += tm.c.entry(i, j) * x_basis.elements[static_cast<size_t>(j)];
      CHECK((rebuilt - y_basis.elements[static_cast<size_t>(i)]).norm() < 1e-8);
    }

    std::vector<AlgebraElement> x_supports, y_supports;
    for (const ModuleVector& e : x_basis.elements)
      x_supports.push_back(support(inner_product(e, e)));
    for (const ModuleVector& e : y_basis.elements)
      y_supports.push_back(support(inner_product(e, e)));
    CHECK((tm.c * tm.d - OperatorMatrix::diagonal(y_supports)).norm() < 1e-9);
    CHECK((tm.d * tm.c - OperatorMatrix::diagonal(x_supports)).norm() < 1e-9);

    const TransferMpReport rep = verify_transfer_mp(tm.c, tm.d, 1e-8);
    CHECK(rep.pass);
    CHECK(rep.max_residual() < 1e-8);
  }
}

TEST_CASE("transfer matrices require Riesz bases of one module") {
  Rng rng(38);
  const AlgebraSpec spec = corpus::random_algebra(rng, 5);
  const ModuleSpec m = corpus::random_module(rng, spec, 3);
  auto [x_basis, y_basis] = corpus::random_riesz_pair(rng, m);

  FrameSet overcomplete = x_basis;
  overcomplete.elements.push_back(x_basis.elements[0]);
  CHECK_THROWS_AS(transfer_matrices(overcomplete, y_basis), PreconditionError);

  const ModuleSpec other = corpus::random_module(rng, spec, 3);
  if (rank_vector(other) != rank_vector(m)) {
    auto [a_basis, b_basis] = corpus::random_riesz_pair(rng, other);
    CHECK_THROWS_AS(transfer_matrices(x_basis, a_basis), PreconditionError);
  }
}

TEST_CASE("Moore-Penrose inverse of a diagonal operator") {
  const AlgebraSpec spec = m2_half();
  const OperatorMatrix m(1, 1, {m2_diag(spec, 2, 8)});
  const OperatorMatrix p = moore_penrose_matrix(m);
  CHECK(std::abs(p.entry(0, 0).block(0)(0, 0) - cplx(0.5, 0)) < 1e-12);
  CHECK(std::abs(p.entry(0, 0).block(0)(1, 1) - cplx(0.125, 0)) < 1e-12);
}

TEST_CASE("Moore-Penrose identities on random rectangular operators") {
  Rng rng(39);
  for (int t = 0; t < 8; ++t) {
    const AlgebraSpec spec = corpus::random_algebra(rng, 5);
    const OperatorMatrix a = corpus::random_operator(rng, spec, 3, 2);
    const OperatorMatrix p = moore_penrose_matrix(a);
    CHECK((a * p * a - a).norm() < 1e-9);
    CHECK((p * a * p - p).norm() < 1e-9);
    CHECK(((a * p).adjoint() - a * p).norm() < 1e-9);
    CHECK(((p * a).adjoint() - p * a).norm() < 1e-9);
  }
}

TEST_CASE("frame validation rejects escapees and non-generating sets") {
  const AlgebraSpec spec = m2_plus_c();
  const ModuleSpec m = diagonal_module(spec, 2, {1, 1});

  // element outside the module
  ModuleVector outside = ModuleVector::zero(spec, 2);
  outside.entry(1) = AlgebraElement::identity(spec);
  if ((apply(outside, m.projection) - outside).norm() > 1e-6) {
    const FrameSet bad{m, {outside}};
    CHECK_THROWS_AS(bad.validate(), InputError);
  }

  // elements that sit inside but fail to span
  Rng rng(40);
  ModuleVector inside = apply(corpus::random_vector(rng, spec, 2), m.projection);
  AlgebraElement killer = AlgebraElement::zero(spec);
  killer.block(0) = Mat::Zero(2, 2);
  killer.block(1) = Mat::Identity(1, 1);
  const FrameSet partial{m, {killer * inside}};
  CHECK_THROWS_AS(partial.validate(), InputError);
}
