#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_support.hpp"

using namespace ts;

TEST_CASE("spec validation rejects malformed data") {
  CHECK_THROWS_AS(AlgebraSpec{}.validate(), InputError);
  CHECK_THROWS_AS((AlgebraSpec{{2}, {0.5, 0.5}}.validate()), InputError);
  CHECK_THROWS_AS((AlgebraSpec{{0}, {1.0}}.validate()), InputError);
  CHECK_THROWS_AS((AlgebraSpec{{1}, {-1.0}}.validate()), InputError);
  // trace of the identity must be one
  CHECK_THROWS_AS((AlgebraSpec{{2, 1}, {0.25, 0.25}}.validate()), InputError);
  CHECK_NOTHROW(m2_plus_c().validate());
  CHECK_NOTHROW(AlgebraSpec::scalar().validate());
  CHECK_NOTHROW(AlgebraSpec::full_matrix(3).validate());
}

TEST_CASE("trace of matrix units") {
  const AlgebraSpec spec = m2_plus_c();
  // weight 1/4 on the 2x2 block: each diagonal unit carries trace 1/4
  const AlgebraElement e11 = AlgebraElement::matrix_unit(spec, 0, 0, 0);
  CHECK(std::abs(trace_state(spec, e11) - cplx(0.25, 0)) < 1e-15);
  const AlgebraElement f = AlgebraElement::matrix_unit(spec, 1, 0, 0);
  CHECK(std::abs(trace_state(spec, f) - cplx(0.5, 0)) < 1e-15);
  CHECK(std::abs(trace_state(spec, AlgebraElement::identity(spec)) - cplx(1, 0)) <
        1e-15);

  // center-valued: block trace divided by block size, weight-free
  const CenterElement tau = center_valued_trace(e11);
  CHECK(std::abs(tau.scalars[0] - cplx(0.5, 0)) < 1e-15);
  CHECK(std::abs(tau.scalars[1]) < 1e-15);
}

TEST_CASE("trace is tracial and compatible with the center-valued trace") {
  Rng rng(11);
  const AlgebraSpec spec = m2_plus_c();
  for (int t = 0; t < 20; ++t) {
    const AlgebraElement a = corpus::random_element(rng, spec);
    const AlgebraElement b = corpus::random_element(rng, spec);
    CHECK(std::abs(trace_state(spec, a * b) - trace_state(spec, b * a)) < 1e-12);

    // tr a = sum_s w_s n_s tau_s(a)
    const CenterElement tau = center_valued_trace(a);
    cplx total = 0.0;
    for (int s = 0; s < spec.num_blocks(); ++s)
      total += spec.weight(s) * static_cast<double>(spec.block_size(s)) *
               tau.scalars[static_cast<size_t>(s)];
    CHECK(std::abs(total - trace_state(spec, a)) < 1e-12);

    // tau is central-linear: tau(z a) = z tau(a) for central z
    CenterElement z;
    z.scalars = {cplx(0.5, 1.0), cplx(-2.0, 0.25)};
    const CenterElement left = center_valued_trace(embed_center(spec, z) * a);
    for (int s = 0; s < spec.num_blocks(); ++s)
      CHECK(std::abs(left.scalars[static_cast<size_t>(s)] -
                     z.scalars[static_cast<size_t>(s)] *
                         tau.scalars[static_cast<size_t>(s)]) < 1e-12);
  }
}

TEST_CASE("faithfulness: trace of a a^dag vanishes only at zero") {
  Rng rng(12);
  const AlgebraSpec spec = m2_plus_c();
  for (int t = 0; t < 10; ++t) {
    const AlgebraElement a = corpus::random_element(rng, spec);
    const double v = trace_state(spec, a * a.adjoint()).real();
    CHECK(v > 0.0);
  }
  const AlgebraElement zero = AlgebraElement::zero(spec);
  CHECK(std::abs(trace_state(spec, zero * zero.adjoint())) == 0.0);
}

TEST_CASE("norm satisfies the C* identity") {
  Rng rng(13);
  const AlgebraSpec spec = m2_plus_c();
  for (int t = 0; t < 10; ++t) {
    const AlgebraElement a = corpus::random_element(rng, spec);
    CHECK(a.norm() == doctest::Approx(a.adjoint().norm()).epsilon(1e-12));
    CHECK((a.adjoint() * a).norm() ==
          doctest::Approx(a.norm() * a.norm()).epsilon(1e-10));
  }
}

TEST_CASE("spectral functions on an explicit diagonal element") {
  const AlgebraSpec spec = m2_half();
  const AlgebraElement d = m2_diag(spec, 1.0, 4.0);
  CHECK((sqrt(d) - m2_diag(spec, 1.0, 2.0)).norm() < 1e-14);
  CHECK((inv(d) - m2_diag(spec, 1.0, 0.25)).norm() < 1e-14);
  CHECK((inv_sqrt(d) - m2_diag(spec, 1.0, 0.5)).norm() < 1e-14);

  const AlgebraElement singular = m2_diag(spec, 2.0, 0.0);
  CHECK((pinv(singular) - m2_diag(spec, 0.5, 0.0)).norm() < 1e-14);
  CHECK((support(singular) - m2_diag(spec, 1.0, 0.0)).norm() < 1e-14);
  CHECK(block_ranks(singular) == std::vector<int>{1});
  CHECK_THROWS_AS(inv(singular), PreconditionError);
  CHECK_THROWS_AS(log(singular), PreconditionError);
}

TEST_CASE("spectral functions compose correctly on random positives") {
  Rng rng(14);
  const AlgebraSpec spec = m2_plus_c();
  for (int t = 0; t < 10; ++t) {
    const AlgebraElement p = corpus::random_positive(rng, spec) +
                             0.1 * AlgebraElement::identity(spec);
    CHECK((sqrt(p) * sqrt(p) - p).norm() < 1e-10);
    CHECK((p * inv(p) - AlgebraElement::identity(spec)).norm() < 1e-9);
    CHECK((inv_sqrt(p) * inv_sqrt(p) - inv(p)).norm() < 1e-9);
  }
}

TEST_CASE("spectral functions respect supports") {
  Rng rng(15);
  const AlgebraSpec spec = m2_plus_c();
  for (int t = 0; t < 10; ++t) {
    const AlgebraElement q = corpus::random_projection(rng, spec);
    const AlgebraElement a = corpus::random_positive(rng, spec);
    const AlgebraElement compressed = q * a * q;
    const AlgebraElement s = support(compressed);
    CHECK(is_projection(s));
    // support stays under the compressing projection
    CHECK((s * q - s).norm() < 1e-9);
    CHECK((compressed * pinv(compressed) - s).norm() < 1e-9);
  }
}

TEST_CASE("spectral preconditions") {
  Rng rng(16);
  const AlgebraSpec spec = m2_half();
  const AlgebraElement a = corpus::random_element(rng, spec);
  CHECK_THROWS_AS(sqrt(a * a), PreconditionError);  // not self-adjoint
  const AlgebraElement neg = m2_diag(spec, 1.0, -1.0);
  CHECK_THROWS_AS(sqrt(neg), PreconditionError);
  CHECK_THROWS_AS(log(neg), PreconditionError);
}

TEST_CASE("predicates") {
  Rng rng(17);
  const AlgebraSpec spec = m2_plus_c();
  const AlgebraElement u = corpus::random_unitary(rng, spec);
  CHECK(is_unitary(u));
  CHECK_FALSE(is_unitary(2.0 * u));
  const AlgebraElement p = corpus::random_projection(rng, spec);
  CHECK(is_projection(p));
  CHECK(is_positive(p));
  CHECK(is_hermitian(p));
  const AlgebraElement h = corpus::random_hermitian(rng, spec);
  CHECK(is_hermitian(h));
}

TEST_CASE("block ranks match a row-reduction oracle") {
  Rng rng(18);
  const AlgebraSpec spec = m2_plus_c();
  for (int t = 0; t < 20; ++t) {
    const AlgebraElement q = corpus::random_projection(rng, spec);
    const std::vector<int> ranks = block_ranks(q);
    for (int s = 0; s < spec.num_blocks(); ++s) {
      CHECK(ranks[static_cast<size_t>(s)] == naive_rank(q.block(s)));
      // a projection's rank is its trace
      CHECK(ranks[static_cast<size_t>(s)] ==
            static_cast<int>(std::lround(q.block(s).trace().real())));
    }
  }
}

TEST_CASE("center element distance") {
  CenterElement a;
  a.scalars = {cplx(1, 0), cplx(0, 2)};
  CenterElement b;
  b.scalars = {cplx(1, 0), cplx(0, 0)};
  CHECK(center_distance(a, b) == doctest::Approx(2.0));
  CHECK(center_distance(a, a) == 0.0);
}
