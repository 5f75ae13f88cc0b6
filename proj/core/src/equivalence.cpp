#include "cstarmod/equivalence.hpp"

#include <cmath>

#include <Eigen/QR>

#include "cstarmod/dense.hpp"
#include "cstarmod/rng.hpp"

namespace cstarmod {

namespace {

// Hermitian matrix function with relative support cutoff, clamping spectral
// dust; fn maps an eigenvalue, zero-classified ones are handled by on_zero.
Mat herm_fn(const Mat& h, double (*fn)(double), double on_zero_value = 0.0) {
  const dense::Eig eig = dense::hermitian_eig(h);
  double top = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    top = std::max(top, std::abs(eig.values(i)));
  const double cut = kRankEps * top;
  RVec mapped = RVec::Zero(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double lam = eig.values(i);
    mapped(i) = (std::abs(lam) <= cut) ? on_zero_value : fn(lam);
  }
  return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

double sqrt_clamped(double x) { return x > 0.0 ? std::sqrt(x) : 0.0; }
double inv_sqrt_clamped(double x) { return x > 0.0 ? 1.0 / std::sqrt(x) : 0.0; }

int basis_offset(const AlgebraSpec& spec, const std::vector<int>& ranks, int s) {
  int off = 0;
  for (int t = 0; t < s; ++t) off += spec.block_size(t) * ranks[static_cast<size_t>(t)];
  return off;
}

}  // namespace

int HilbertianModel::unit_index(int s, int u, int v) const {
  int off = 0;
  for (int t = 0; t < s; ++t) off += algebra.block_size(t) * algebra.block_size(t);
  return off + u * algebra.block_size(s) + v;
}

HilbertianModel scalarize(const ModuleSpec& m) {
  const AlgebraSpec& spec = m.algebra;
  const std::vector<int> ranks = rank_vector(m);
  const UnfoldedPicture pp = unfold(m.projection);

  HilbertianModel h;
  h.algebra = spec;
  for (int s = 0; s < spec.num_blocks(); ++s)
    h.complex_dimension += spec.block_size(s) * ranks[static_cast<size_t>(s)];

  // Reduced basis: per block an orthonormal row family placed in every row
  // slot.  Orthogonal with squared length w_s under the scalarized product.
  for (int s = 0; s < spec.num_blocks(); ++s) {
    const int ns = spec.block_size(s);
    const Mat range = dense::projection_range_basis(pp.blocks[static_cast<size_t>(s)]);
    for (int t = 0; t < ns; ++t)
      for (int j = 0; j < ranks[static_cast<size_t>(s)]; ++j) {
        UnfoldedPicture vec;
        vec.kind = UnfoldedPicture::Kind::kVector;
        vec.rows = m.ambient_rank;
        vec.cols = 1;
        vec.block_sizes = spec.block_sizes;
        for (int b = 0; b < spec.num_blocks(); ++b) {
          const int nb = spec.block_size(b);
          Mat blk = Mat::Zero(nb, static_cast<Eigen::Index>(m.ambient_rank) * nb);
          if (b == s) blk.row(t) = range.col(j).adjoint();
          vec.blocks.push_back(std::move(blk));
        }
        h.basis.push_back(refold_vector(vec));
      }
  }

  const int d = h.complex_dimension;
  h.basis_gram = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      h.basis_gram(i, j) = scalar_inner_product(spec, h.basis[static_cast<size_t>(i)],
                                                h.basis[static_cast<size_t>(j)]);

  // Natural generating family: every matrix unit applied to every row of P.
  std::vector<ModuleVector> spanning;
  for (int s = 0; s < spec.num_blocks(); ++s)
    for (int u = 0; u < spec.block_size(s); ++u)
      for (int v = 0; v < spec.block_size(s); ++v) {
        const AlgebraElement unit = AlgebraElement::matrix_unit(spec, s, u, v);
        for (int a = 0; a < m.ambient_rank; ++a) {
          std::vector<AlgebraElement> entries;
          entries.reserve(static_cast<size_t>(m.ambient_rank));
          for (int b = 0; b < m.ambient_rank; ++b)
            entries.push_back(unit * m.projection.entry(a, b));
          spanning.emplace_back(std::move(entries));
        }
      }
  const int span_count = static_cast<int>(spanning.size());
  h.spanning_gram = Mat(span_count, span_count);
  for (int i = 0; i < span_count; ++i)
    for (int j = 0; j < span_count; ++j)
      h.spanning_gram(i, j) = scalar_inner_product(
          spec, spanning[static_cast<size_t>(i)], spanning[static_cast<size_t>(j)]);

  // Action of each matrix unit recorded in basis coordinates.
  for (int s = 0; s < spec.num_blocks(); ++s)
    for (int u = 0; u < spec.block_size(s); ++u)
      for (int v = 0; v < spec.block_size(s); ++v) {
        const AlgebraElement unit = AlgebraElement::matrix_unit(spec, s, u, v);
        Mat action = Mat::Zero(d, d);
        for (int j = 0; j < d; ++j)
          action.col(j) =
              scalar_coordinates(h, unit * h.basis[static_cast<size_t>(j)]);
        h.unit_actions.push_back(std::move(action));
      }
  return h;
}

Eigen::VectorXcd scalar_coordinates(const HilbertianModel& h, const ModuleVector& x) {
  Eigen::VectorXcd c(h.complex_dimension);
  for (int i = 0; i < h.complex_dimension; ++i)
    c(i) = scalar_inner_product(h.algebra, x, h.basis[static_cast<size_t>(i)]) /
           h.basis_gram(i, i);
  return c;
}

AlgebraElement gram_from_scalar_data(const HilbertianModel& h,
                                     const Eigen::VectorXcd& x_coords,
                                     const Eigen::VectorXcd& y_coords) {
  AlgebraElement out = AlgebraElement::zero(h.algebra);
  for (int s = 0; s < h.algebra.num_blocks(); ++s) {
    const double w = h.algebra.weight(s);
    for (int u = 0; u < h.algebra.block_size(s); ++u)
      for (int v = 0; v < h.algebra.block_size(s); ++v) {
        const Mat& action = h.unit_actions[static_cast<size_t>(h.unit_index(s, u, v))];
        const Eigen::VectorXcd moved = action * y_coords;
        // <x, e_uv . y>_C with the form linear in the first slot.
        const cplx val =
            (x_coords.transpose() * h.basis_gram * moved.conjugate())(0, 0);
        out.block(s)(u, v) = val / w;
      }
  }
  return out;
}

Mat scalar_matrix(const HilbertianModel& h, const OperatorMatrix& t) {
  Mat m(h.complex_dimension, h.complex_dimension);
  for (int j = 0; j < h.complex_dimension; ++j)
    m.col(j) = scalar_coordinates(h, apply(h.basis[static_cast<size_t>(j)], t));
  return m;
}

double adjoint_consistency_residual(const ModuleSpec& m, const OperatorMatrix& t) {
  const HilbertianModel h = scalarize(m);
  const Mat mt = scalar_matrix(h, t);
  const Mat mt_star = scalar_matrix(h, t.adjoint());
  // Adjoint w.r.t. the recorded (diagonal, real) Gram.
  Mat gamma_inv = Mat::Zero(h.complex_dimension, h.complex_dimension);
  for (int i = 0; i < h.complex_dimension; ++i)
    gamma_inv(i, i) = cplx(1.0, 0.0) / h.basis_gram(i, i);
  const Mat scalar_adjoint = gamma_inv * mt.adjoint() * h.basis_gram;
  return dense::op_norm(mt_star - scalar_adjoint);
}

void InnerProductForm::validate(const ModuleSpec& m, double tol) const {
  if (g.rows() != m.ambient_rank || g.cols() != m.ambient_rank)
    throw InputError("form: shape does not match ambient rank");
  if (!g.shape_matches(m.algebra))
    throw InputError("form: entries do not match the algebra");
  const double scale = std::max(g.norm(), 1.0);
  if ((g - g.adjoint()).norm() > tol * scale)
    throw InputError("form: not self-adjoint");
  if ((g - m.projection * g * m.projection).norm() > tol * scale)
    throw InputError("form: not compressed to the module");
  const UnfoldedPicture gp = unfold(g);
  const UnfoldedPicture pp = unfold(m.projection);
  double top = 0.0;
  double least = -1.0;
  for (size_t s = 0; s < gp.blocks.size(); ++s) {
    const Mat basis = dense::projection_range_basis(pp.blocks[s]);
    if (basis.cols() == 0) continue;
    const RVec vals =
        dense::hermitian_eig(basis.adjoint() * gp.blocks[s] * basis).values;
    top = std::max(top, std::abs(vals(vals.size() - 1)));
    least = (least < 0.0) ? vals(0) : std::min(least, vals(0));
  }
  if (least >= 0.0 && least <= kRankEps * std::max(top, 1.0))
    throw PreconditionError("form: not positive and invertible on the module");
  if (least < 0.0 && top == 0.0) return;  // zero module, nothing to check
  if (least < -kRankEps * std::max(top, 1.0))
    throw PreconditionError("form: negative eigenvalue on the module");
}

OperatorMatrix link_inner_products(const ModuleSpec& m, const InnerProductForm& g1,
                                   const InnerProductForm& g2) {
  g1.validate(m);
  g2.validate(m);
  const UnfoldedPicture p1 = unfold(g1.g);
  const UnfoldedPicture p2 = unfold(g2.g);
  UnfoldedPicture out;
  out.kind = UnfoldedPicture::Kind::kOperator;
  out.rows = m.ambient_rank;
  out.cols = m.ambient_rank;
  out.block_sizes = p1.block_sizes;
  for (size_t s = 0; s < p1.blocks.size(); ++s) {
    const Mat half = herm_fn(p2.blocks[s], sqrt_clamped);
    const Mat half_inv = herm_fn(p2.blocks[s], inv_sqrt_clamped);
    const Mat mid = herm_fn(half * p1.blocks[s] * half, sqrt_clamped);
    out.blocks.push_back(half_inv * mid * half_inv);
  }
  return refold_operator(out);
}

double linking_residual(const ModuleSpec& m, const OperatorMatrix& t,
                        const InnerProductForm& g1, const InnerProductForm& g2) {
  (void)m;
  return (t * g2.g * t - g1.g).norm();
}

namespace {

// Stacked constraint Gram for the commutation system [Z, L_b] = 0:
// sum_b (L_b^T (x) I - I (x) L_b)^dag (L_b^T (x) I - I (x) L_b).
// Its zero eigenspace is the commutant of the family, vectorized col-major.
Mat commutation_gram(const std::vector<Mat>& family) {
  const Eigen::Index dim = family.front().rows();
  const Mat id = Mat::Identity(dim, dim);
  Mat gram = Mat::Zero(dim * dim, dim * dim);
  for (const Mat& l : family) {
    const Mat c = dense::kron(l.transpose(), id) - dense::kron(id, l);
    gram += c.adjoint() * c;
  }
  return gram;
}

// Zero eigenvectors of the constraint Gram, reshaped back to matrices.
std::vector<Mat> commutant_basis(const Mat& gram, Eigen::Index dim) {
  const dense::Eig eig = dense::hermitian_eig(gram);
  double top = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    top = std::max(top, std::abs(eig.values(i)));
  const double cut = 1e-8 * std::max(top, 1.0);
  std::vector<Mat> basis;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (std::abs(eig.values(i)) > cut) continue;
    Mat z(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col)
      z.col(col) = eig.vectors.col(i).segment(col * dim, dim);
    basis.push_back(std::move(z));
  }
  return basis;
}

}  // namespace

CommutantReport commutant_check(const ModuleSpec& m) {
  const AlgebraSpec& spec = m.algebra;
  if (spec.block_dim_sum() > 6 || m.ambient_rank > 4)
    throw InputError("commutant: size guard exceeded (block sum <= 6, rank <= 4)");

  const HilbertianModel h = scalarize(m);
  if (h.complex_dimension > 18)
    throw InputError("commutant: size guard exceeded (scalarized dimension <= 18)");
  const std::vector<int> ranks = rank_vector(m);

  CommutantReport rep;
  for (size_t s = 0; s < ranks.size(); ++s) {
    rep.expected_commutant_dim += ranks[s] * ranks[s];
    if (ranks[s] > 0)
      rep.expected_bicommutant_dim +=
          spec.block_sizes[s] * spec.block_sizes[s];
  }

  // The recorded actions of the central block units are exact coordinate
  // projections; commuting with them forces block-diagonal commutants, so the
  // system splits per block.  Verified, not assumed.
  for (int s = 0; s < spec.num_blocks(); ++s) {
    Mat central = Mat::Zero(h.complex_dimension, h.complex_dimension);
    for (int u = 0; u < spec.block_size(s); ++u)
      central += h.unit_actions[static_cast<size_t>(h.unit_index(s, u, u))];
    Mat indicator = Mat::Zero(h.complex_dimension, h.complex_dimension);
    const int off = basis_offset(spec, ranks, s);
    const int len = spec.block_size(s) * ranks[static_cast<size_t>(s)];
    for (int i = 0; i < len; ++i) indicator(off + i, off + i) = cplx(1.0, 0.0);
    if (dense::op_norm(central - indicator) > 1e-8)
      throw Error("commutant: central unit action is not a coordinate projection");
  }

  for (int s = 0; s < spec.num_blocks(); ++s) {
    const int dim = spec.block_size(s) * ranks[static_cast<size_t>(s)];
    if (dim == 0) {
      rep.block_commutant_dims.push_back(0);
      rep.block_bicommutant_dims.push_back(0);
      continue;
    }
    const int off = basis_offset(spec, ranks, s);
    std::vector<Mat> family;
    for (int u = 0; u < spec.block_size(s); ++u)
      for (int v = 0; v < spec.block_size(s); ++v)
        family.push_back(h.unit_actions[static_cast<size_t>(h.unit_index(s, u, v))]
                             .block(off, off, dim, dim));
    const std::vector<Mat> comm = commutant_basis(commutation_gram(family), dim);
    rep.block_commutant_dims.push_back(static_cast<int>(comm.size()));
    if (comm.empty()) {
      rep.block_bicommutant_dims.push_back(0);
      continue;
    }
    const std::vector<Mat> bicomm = commutant_basis(commutation_gram(comm), dim);
    rep.block_bicommutant_dims.push_back(static_cast<int>(bicomm.size()));
  }

  for (int v : rep.block_commutant_dims) rep.commutant_dim += v;
  for (int v : rep.block_bicommutant_dims) rep.bicommutant_dim += v;
  rep.pass = rep.commutant_dim == rep.expected_commutant_dim &&
             rep.bicommutant_dim == rep.expected_bicommutant_dim;
  return rep;
}

InvarianceReport embedding_invariance(const ModuleSpec& m, int trials,
                                      std::uint64_t seed, double tol) {
  const double base_scalar = scalar_dimension(m);
  const CenterElement base_center = center_valued_dimension(m);
  const Rng root(seed);

  InvarianceReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng = root.split(static_cast<std::uint64_t>(t));
    const int wider = m.ambient_rank + 1 + (t % 2);

    // Random isometric embedding W of the free module, W W^dag = 1, built
    // blockwise from thin QR factors of Gaussian matrices.
    UnfoldedPicture wp;
    wp.kind = UnfoldedPicture::Kind::kOperator;
    wp.rows = m.ambient_rank;
    wp.cols = wider;
    wp.block_sizes = m.algebra.block_sizes;
    for (int s = 0; s < m.algebra.num_blocks(); ++s) {
      const int ns = m.algebra.block_size(s);
      const Eigen::Index tall = static_cast<Eigen::Index>(wider) * ns;
      const Eigen::Index narrow = static_cast<Eigen::Index>(m.ambient_rank) * ns;
      Mat gauss(tall, narrow);
      for (Eigen::Index i = 0; i < tall; ++i)
        for (Eigen::Index j = 0; j < narrow; ++j)
          gauss(i, j) = rng.normal_complex();
      Eigen::HouseholderQR<Mat> qr(gauss);
      const Mat thin_q =
          qr.householderQ() * Mat::Identity(tall, narrow);
      wp.blocks.push_back(thin_q.adjoint());
    }
    const OperatorMatrix w = refold_operator(wp);
    const ModuleSpec embedded{m.algebra, wider,
                              w.adjoint() * m.projection * w, std::nullopt};

    rep.max_scalar_deviation =
        std::max(rep.max_scalar_deviation,
                 std::abs(scalar_dimension(embedded) - base_scalar));
    rep.max_center_deviation =
        std::max(rep.max_center_deviation,
                 center_distance(center_valued_dimension(embedded), base_center));
  }
  rep.pass = rep.max_scalar_deviation <= tol && rep.max_center_deviation <= tol;
  return rep;
}

}  // namespace cstarmod
