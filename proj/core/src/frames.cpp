#include "cstarmod/frames.hpp"

#include <cmath>
#include <sstream>

#include "cstarmod/dense.hpp"

namespace cstarmod {

void FrameSet::validate(double tol) const {
  module.validate();
  if (elements.empty()) throw InputError("frame: needs at least one element");
  for (size_t i = 0; i < elements.size(); ++i) {
    const ModuleVector& x = elements[i];
    if (x.length() != module.ambient_rank)
      throw InputError("frame: element length does not match ambient rank");
    if (!x.entry(0).shape_matches(module.algebra))
      throw InputError("frame: element blocks do not match the algebra");
    const ModuleVector diff = apply(x, module.projection) - x;
    if (diff.norm() > tol * std::max(1.0, x.norm())) {
      std::ostringstream os;
      os << "frame: element " << i << " does not lie in the module";
      throw InputError(os.str());
    }
  }
  const ModuleSpec span = span_module(module.algebra, module.ambient_rank, elements);
  if (rank_vector(span) != rank_vector(module))
    throw InputError("frame: elements do not generate the module");
}

GramMatrix gram(const FrameSet& f) {
  const int k = f.size();
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(k) * static_cast<size_t>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      entries.push_back(inner_product(f.elements[static_cast<size_t>(i)],
                                      f.elements[static_cast<size_t>(j)]));
  return GramMatrix(k, k, std::move(entries));
}

OperatorMatrix frame_operator(const FrameSet& f) {
  OperatorMatrix s = rank_one_operator(f.elements[0], f.elements[0]);
  for (int i = 1; i < f.size(); ++i)
    s = s + rank_one_operator(f.elements[static_cast<size_t>(i)],
                              f.elements[static_cast<size_t>(i)]);
  return s;
}

namespace {

// Eigenvalues of a self-adjoint operator matrix compressed to the module,
// per block: eig( A_s^dag  H_s  A_s ) with A_s an orthonormal range basis of
// the unfolded projection.
std::vector<RVec> restricted_spectra(const OperatorMatrix& h, const ModuleSpec& m) {
  const UnfoldedPicture hp = unfold(h);
  const UnfoldedPicture pp = unfold(m.projection);
  std::vector<RVec> spectra;
  spectra.reserve(hp.blocks.size());
  for (size_t s = 0; s < hp.blocks.size(); ++s) {
    const Mat basis = dense::projection_range_basis(pp.blocks[s]);
    if (basis.cols() == 0) {
      spectra.push_back(RVec());
      continue;
    }
    const Mat restricted = basis.adjoint() * hp.blocks[s] * basis;
    spectra.push_back(dense::hermitian_eig(restricted).values);
  }
  return spectra;
}

// Blockwise Hermitian function of an operator matrix, supported on the
// nonzero spectrum.  Used for S^(-1/2) and S^+.
OperatorMatrix spectral_matrix_fn(const OperatorMatrix& h, SpectralFn fn) {
  UnfoldedPicture pic = unfold(h);
  double top = 0.0;
  std::vector<dense::Eig> eigs;
  eigs.reserve(pic.blocks.size());
  for (const Mat& b : pic.blocks) {
    eigs.push_back(dense::hermitian_eig(b));
    for (Eigen::Index i = 0; i < eigs.back().values.size(); ++i)
      top = std::max(top, std::abs(eigs.back().values(i)));
  }
  const double cut = kRankEps * top;
  for (size_t s = 0; s < pic.blocks.size(); ++s) {
    const dense::Eig& eig = eigs[s];
    RVec mapped = RVec::Zero(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
      const double lam = eig.values(i);
      if (std::abs(lam) <= cut) continue;
      switch (fn) {
        case SpectralFn::kInvSqrt:
          mapped(i) = 1.0 / std::sqrt(lam);
          break;
        case SpectralFn::kPinv:
          mapped(i) = 1.0 / lam;
          break;
        default:
          throw Error("spectral_matrix_fn: unsupported function");
      }
    }
    pic.blocks[s] = eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
  }
  return refold_operator(pic);
}

}  // namespace

FrameBounds frame_bounds(const FrameSet& f) {
  const std::vector<RVec> spectra = restricted_spectra(frame_operator(f), f.module);
  bool seen = false;
  FrameBounds b;
  for (const RVec& v : spectra) {
    if (v.size() == 0) continue;
    if (!seen) {
      b.lower = v(0);
      b.upper = v(v.size() - 1);
      seen = true;
    } else {
      b.lower = std::min(b.lower, v(0));
      b.upper = std::max(b.upper, v(v.size() - 1));
    }
  }
  if (!seen) return {1.0, 1.0};  // zero module: vacuously tight
  if (b.lower <= 1e-12 * std::max(b.upper, 1.0))
    throw PreconditionError(
        "frame_bounds: lower bound vanishes, elements do not generate");
  return b;
}

bool is_normalized_tight(const FrameSet& f, double tol) {
  return (frame_operator(f) - f.module.projection).norm() <= tol;
}

ModuleVector reconstruct(const FrameSet& f, const ModuleVector& x) {
  return apply(x, frame_operator(f));
}

FrameSet canonical_tight(const FrameSet& f) {
  const OperatorMatrix half_inv =
      spectral_matrix_fn(frame_operator(f), SpectralFn::kInvSqrt);
  std::vector<ModuleVector> tightened;
  tightened.reserve(f.elements.size());
  for (const ModuleVector& x : f.elements) tightened.push_back(apply(x, half_inv));
  return {f.module, std::move(tightened)};
}

OperatorMatrix retightening_form(const FrameSet& f) {
  return spectral_matrix_fn(frame_operator(f), SpectralFn::kPinv);
}

double retightening_residual(const FrameSet& f, const OperatorMatrix& g,
                             const std::vector<ModuleVector>& probes) {
  double worst = 0.0;
  auto probe = [&](const ModuleVector& x) {
    const ModuleVector xg = apply(x, g);
    AlgebraElement rhs = AlgebraElement::zero(f.module.algebra);
    for (const ModuleVector& xi : f.elements) {
      // <x, x_i>_G <x_i, x>_G with <u, v>_G = <u.G, v>
      const AlgebraElement left = inner_product(xg, xi);
      const AlgebraElement right = inner_product(apply(xi, g), x);
      rhs += left * right;
    }
    worst = std::max(worst, (inner_product(xg, x) - rhs).norm());
  };
  for (const ModuleVector& x : f.elements) probe(x);
  for (const ModuleVector& x : probes) probe(x);
  return worst;
}

bool frames_equal_gram(const FrameSet& f, const FrameSet& g, double tol) {
  if (f.size() != g.size()) return false;
  for (const ModuleVector& x : f.elements)
    if (x.norm() <= tol) return false;
  for (const ModuleVector& y : g.elements)
    if (y.norm() <= tol) return false;
  const GramMatrix gf = gram(f);
  const GramMatrix gg = gram(g);
  for (int i = 0; i < f.size(); ++i)
    for (int j = 0; j < f.size(); ++j)
      if ((gf.entry(i, j) - gg.entry(i, j)).norm() > tol) return false;
  return true;
}

OperatorMatrix unitary_from_matched_frames(const FrameSet& f, const FrameSet& g,
                                           double tol) {
  if (f.size() != g.size())
    throw PreconditionError("matched frames: sizes differ");
  if (!is_normalized_tight(f, tol) || !is_normalized_tight(g, tol))
    throw PreconditionError("matched frames: both frames must be normalized tight");
  if (!frames_equal_gram(f, g, tol))
    throw PreconditionError("matched frames: Gram matrices differ");
  OperatorMatrix v = rank_one_operator(f.elements[0], g.elements[0]);
  for (int i = 1; i < f.size(); ++i)
    v = v + rank_one_operator(f.elements[static_cast<size_t>(i)],
                              g.elements[static_cast<size_t>(i)]);
  return v;
}

bool is_riesz_basis(const FrameSet& f) {
  const AlgebraSpec& spec = f.module.algebra;
  const int k = f.size();
  // Support projections p_i of <x_i, x_i>; the containment
  // A(1-p_1) (+) ... (+) A(1-p_k) <= ker(synthesis) is automatic because
  // p_i x_i = x_i; verified here before the dimension count.
  std::vector<AlgebraElement> supports;
  supports.reserve(static_cast<size_t>(k));
  for (const ModuleVector& x : f.elements) {
    const AlgebraElement p = support(inner_product(x, x));
    const ModuleVector fixed = p * x;
    if ((fixed - x).norm() > 1e-8 * std::max(1.0, x.norm()))
      throw Error("riesz test: support projection does not fix its element");
    supports.push_back(p);
  }

  for (int s = 0; s < spec.num_blocks(); ++s) {
    const int ns = spec.block_size(s);
    Mat stacked(static_cast<Eigen::Index>(k) * ns,
                static_cast<Eigen::Index>(f.module.ambient_rank) * ns);
    for (int i = 0; i < k; ++i)
      stacked.middleRows(static_cast<Eigen::Index>(i) * ns, ns) =
          unfold(f.elements[static_cast<size_t>(i)]).blocks[static_cast<size_t>(s)];
    const int syn_rank = dense::rank(stacked);
    // ker dimension (per row of a coefficient tuple) vs the free complement.
    const int kernel_dim = k * ns - syn_rank;
    int complement_dim = 0;
    for (int i = 0; i < k; ++i)
      complement_dim +=
          ns - dense::rank(supports[static_cast<size_t>(i)].block(s));
    if (kernel_dim != complement_dim) return false;
  }
  return true;
}

TransferMatrices transfer_matrices(const FrameSet& x_basis, const FrameSet& y_basis,
                                   double tol) {
  const AlgebraSpec& spec = x_basis.module.algebra;
  if (!spec.same_as(y_basis.module.algebra))
    throw ShapeError("transfer: bases over different algebras");
  if (x_basis.module.ambient_rank != y_basis.module.ambient_rank ||
      (x_basis.module.projection - y_basis.module.projection).norm() > 1e-8)
    throw PreconditionError("transfer: bases span different modules");
  if (!is_riesz_basis(x_basis) || !is_riesz_basis(y_basis))
    throw PreconditionError("transfer: both tuples must be Riesz bases");

  const int k = x_basis.size();
  const int l = y_basis.size();
  const int n = x_basis.module.ambient_rank;

  std::vector<AlgebraElement> p_supports, q_supports;
  for (const ModuleVector& x : x_basis.elements)
    p_supports.push_back(support(inner_product(x, x)));
  for (const ModuleVector& y : y_basis.elements)
    q_supports.push_back(support(inner_product(y, y)));

  auto stack = [&](const std::vector<ModuleVector>& elems, int s) {
    const int ns = spec.block_size(s);
    Mat m(static_cast<Eigen::Index>(elems.size()) * ns,
          static_cast<Eigen::Index>(n) * ns);
    for (size_t i = 0; i < elems.size(); ++i)
      m.middleRows(static_cast<Eigen::Index>(i) * ns, ns) =
          unfold(elems[i]).blocks[static_cast<size_t>(s)];
    return m;
  };

  UnfoldedPicture cp, dp;
  cp.kind = dp.kind = UnfoldedPicture::Kind::kOperator;
  cp.rows = l;
  cp.cols = k;
  dp.rows = k;
  dp.cols = l;
  cp.block_sizes = dp.block_sizes = spec.block_sizes;
  for (int s = 0; s < spec.num_blocks(); ++s) {
    const Mat xs = stack(x_basis.elements, s);
    const Mat ys = stack(y_basis.elements, s);
    cp.blocks.push_back(ys * dense::pinv(xs));  // minimal-norm C X = Y
    dp.blocks.push_back(xs * dense::pinv(ys));
  }
  OperatorMatrix c = refold_operator(cp);
  OperatorMatrix d = refold_operator(dp);

  // Carrier compression: c_ij = q_i c_ij p_j, d_ji = p_j d_ji q_i.  The
  // defining equations survive exactly because the supports fix the elements.
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < k; ++j)
      c.entry(i, j) = q_supports[static_cast<size_t>(i)] * c.entry(i, j) *
                      p_supports[static_cast<size_t>(j)];
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < l; ++i)
      d.entry(j, i) = p_supports[static_cast<size_t>(j)] * d.entry(j, i) *
                      q_supports[static_cast<size_t>(i)];

  // The solved systems must reproduce the bases.
  double residual = 0.0;
  for (int i = 0; i < l; ++i) {
    ModuleVector yi = ModuleVector::zero(spec, n);
    for (int j = 0; j < k; ++j)
      yi += c.entry(i, j) * x_basis.elements[static_cast<size_t>(j)];
    residual = std::max(residual,
                        (yi - y_basis.elements[static_cast<size_t>(i)]).norm());
  }
  for (int j = 0; j < k; ++j) {
    ModuleVector xj = ModuleVector::zero(spec, n);
    for (int i = 0; i < l; ++i)
      xj += d.entry(j, i) * y_basis.elements[static_cast<size_t>(i)];
    residual = std::max(residual,
                        (xj - x_basis.elements[static_cast<size_t>(j)]).norm());
  }
  if (residual > std::max(tol, 1e-8))
    throw PreconditionError("transfer: coefficient systems are inconsistent");

  return {std::move(c), std::move(d)};
}

OperatorMatrix moore_penrose_matrix(const OperatorMatrix& m) {
  const UnfoldedPicture pic = unfold(m);
  UnfoldedPicture out;
  out.kind = UnfoldedPicture::Kind::kOperator;
  out.rows = m.cols();
  out.cols = m.rows();
  out.block_sizes = pic.block_sizes;
  for (const Mat& b : pic.blocks) out.blocks.push_back(dense::pinv(b));
  return refold_operator(out);
}

double TransferMpReport::max_residual() const {
  double m = std::max(d_vs_pinv_c, c_vs_pinv_d);
  m = std::max(m, std::max(penrose_cdc, penrose_dcd));
  return std::max(m, std::max(penrose_cd_sa, penrose_dc_sa));
}

TransferMpReport verify_transfer_mp(const OperatorMatrix& c, const OperatorMatrix& d,
                                    double tol) {
  TransferMpReport r;
  const OperatorMatrix cd = c * d;
  const OperatorMatrix dc = d * c;
  r.d_vs_pinv_c = (d - moore_penrose_matrix(c)).norm();
  r.c_vs_pinv_d = (c - moore_penrose_matrix(d)).norm();
  r.penrose_cdc = (cd * c - c).norm();
  r.penrose_dcd = (dc * d - d).norm();
  r.penrose_cd_sa = (cd.adjoint() - cd).norm();
  r.penrose_dc_sa = (dc.adjoint() - dc).norm();
  r.pass = r.max_residual() <= tol;
  return r;
}

}  // namespace cstarmod
