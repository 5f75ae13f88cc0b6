#include "cstarmod/algebra.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "cstarmod/dense.hpp"

namespace cstarmod {

int AlgebraSpec::block_dim_sum() const {
  return std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
}

void AlgebraSpec::validate(double tol) const {
  if (block_sizes.empty())
    throw InputError("algebra: at least one block is required");
  if (block_sizes.size() != trace_weights.size())
    throw InputError("algebra: block_sizes and trace_weights lengths differ");
  for (size_t s = 0; s < block_sizes.size(); ++s) {
    if (block_sizes[s] < 1) {
      std::ostringstream os;
      os << "algebra: block " << s << " has non-positive size " << block_sizes[s];
      throw InputError(os.str());
    }
    if (!(trace_weights[s] > 0.0)) {
      std::ostringstream os;
      os << "algebra: trace weight " << s << " is not strictly positive";
      throw InputError(os.str());
    }
  }
  double sum = 0.0;
  for (size_t s = 0; s < block_sizes.size(); ++s)
    sum += trace_weights[s] * block_sizes[s];
  if (std::abs(sum - 1.0) > tol) {
    std::ostringstream os;
    os << "algebra: trace normalization sum w_s*n_s = " << sum
       << " differs from 1 beyond tolerance " << tol;
    throw InputError(os.str());
  }
}

bool AlgebraSpec::same_as(const AlgebraSpec& other, double tol) const {
  if (block_sizes != other.block_sizes) return false;
  for (size_t s = 0; s < trace_weights.size(); ++s)
    if (std::abs(trace_weights[s] - other.trace_weights[s]) > tol) return false;
  return true;
}

AlgebraSpec AlgebraSpec::scalar() { return {{1}, {1.0}}; }

AlgebraSpec AlgebraSpec::full_matrix(int n) {
  return {{n}, {1.0 / static_cast<double>(n)}};
}

AlgebraSpec AlgebraSpec::with_uniform_weights(std::vector<int> block_sizes) {
  const double total = static_cast<double>(
      std::accumulate(block_sizes.begin(), block_sizes.end(), 0));
  std::vector<double> w(block_sizes.size(), 1.0 / total);
  return {std::move(block_sizes), std::move(w)};
}

CenterElement& CenterElement::operator+=(const CenterElement& o) {
  for (size_t s = 0; s < scalars.size(); ++s) scalars[s] += o.scalars[s];
  return *this;
}

CenterElement& CenterElement::operator-=(const CenterElement& o) {
  for (size_t s = 0; s < scalars.size(); ++s) scalars[s] -= o.scalars[s];
  return *this;
}

double CenterElement::max_abs() const {
  double m = 0.0;
  for (const cplx& c : scalars) m = std::max(m, std::abs(c));
  return m;
}

CenterElement operator+(CenterElement a, const CenterElement& b) { return a += b; }
CenterElement operator-(CenterElement a, const CenterElement& b) { return a -= b; }

double center_distance(const CenterElement& a, const CenterElement& b) {
  return (a - b).max_abs();
}

AlgebraElement AlgebraElement::zero(const AlgebraSpec& spec) {
  std::vector<Mat> blocks;
  blocks.reserve(spec.block_sizes.size());
  for (int n : spec.block_sizes) blocks.push_back(Mat::Zero(n, n));
  return AlgebraElement(std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const AlgebraSpec& spec) {
  std::vector<Mat> blocks;
  blocks.reserve(spec.block_sizes.size());
  for (int n : spec.block_sizes) blocks.push_back(Mat::Identity(n, n));
  return AlgebraElement(std::move(blocks));
}

AlgebraElement AlgebraElement::matrix_unit(const AlgebraSpec& spec, int s, int u,
                                           int v) {
  AlgebraElement e = zero(spec);
  e.block(s)(u, v) = cplx(1.0, 0.0);
  return e;
}

bool AlgebraElement::shape_matches(const AlgebraSpec& spec) const {
  if (num_blocks() != spec.num_blocks()) return false;
  for (int s = 0; s < num_blocks(); ++s)
    if (block(s).rows() != spec.block_size(s) ||
        block(s).cols() != spec.block_size(s))
      return false;
  return true;
}

bool AlgebraElement::shape_matches(const AlgebraElement& other) const {
  if (num_blocks() != other.num_blocks()) return false;
  for (int s = 0; s < num_blocks(); ++s)
    if (block(s).rows() != other.block(s).rows() ||
        block(s).cols() != other.block(s).cols())
      return false;
  return true;
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Mat> blocks;
  blocks.reserve(blocks_.size());
  for (const Mat& b : blocks_) blocks.push_back(b.adjoint());
  return AlgebraElement(std::move(blocks));
}

double AlgebraElement::norm() const {
  double m = 0.0;
  for (const Mat& b : blocks_) m = std::max(m, dense::op_norm(b));
  return m;
}

namespace {

void require_same_shape(const AlgebraElement& a, const AlgebraElement& b) {
  if (!a.shape_matches(b))
    throw ShapeError("algebra elements live over different block structures");
}

}  // namespace

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  require_same_shape(*this, o);
  for (int s = 0; s < num_blocks(); ++s) block(s) += o.block(s);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  require_same_shape(*this, o);
  for (int s = 0; s < num_blocks(); ++s) block(s) -= o.block(s);
  return *this;
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }

AlgebraElement operator-(const AlgebraElement& a) {
  return cplx(-1.0, 0.0) * a;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_shape(a, b);
  std::vector<Mat> blocks;
  blocks.reserve(static_cast<size_t>(a.num_blocks()));
  for (int s = 0; s < a.num_blocks(); ++s) blocks.push_back(a.block(s) * b.block(s));
  return AlgebraElement(std::move(blocks));
}

AlgebraElement operator*(const cplx& c, const AlgebraElement& a) {
  std::vector<Mat> blocks;
  blocks.reserve(static_cast<size_t>(a.num_blocks()));
  for (int s = 0; s < a.num_blocks(); ++s) blocks.push_back(c * a.block(s));
  return AlgebraElement(std::move(blocks));
}

AlgebraElement operator*(const AlgebraElement& a, const cplx& c) { return c * a; }

cplx trace_state(const AlgebraSpec& spec, const AlgebraElement& a) {
  if (!a.shape_matches(spec))
    throw ShapeError("trace_state: element does not match the algebra");
  cplx t(0.0, 0.0);
  for (int s = 0; s < spec.num_blocks(); ++s)
    t += spec.weight(s) * a.block(s).trace();
  return t;
}

CenterElement center_valued_trace(const AlgebraElement& a) {
  CenterElement c;
  c.scalars.reserve(static_cast<size_t>(a.num_blocks()));
  for (int s = 0; s < a.num_blocks(); ++s)
    c.scalars.push_back(a.block(s).trace() /
                        static_cast<double>(a.block(s).rows()));
  return c;
}

AlgebraElement embed_center(const AlgebraSpec& spec, const CenterElement& c) {
  if (c.num_blocks() != spec.num_blocks())
    throw ShapeError("embed_center: block count mismatch");
  AlgebraElement a = AlgebraElement::zero(spec);
  for (int s = 0; s < spec.num_blocks(); ++s)
    a.block(s) = c.scalars[static_cast<size_t>(s)] *
                 Mat::Identity(spec.block_size(s), spec.block_size(s));
  return a;
}

AlgebraElement apply_spectral(const AlgebraElement& a, SpectralFn fn, double eps) {
  const double herm_tol = 1e-9 * std::max(a.norm(), 1.0);
  double top = 0.0;
  std::vector<dense::Eig> eigs;
  eigs.reserve(static_cast<size_t>(a.num_blocks()));
  for (int s = 0; s < a.num_blocks(); ++s) {
    if (!dense::is_hermitian(a.block(s), herm_tol))
      throw PreconditionError("spectral calculus requires a Hermitian element");
    eigs.push_back(dense::hermitian_eig(a.block(s)));
    for (Eigen::Index i = 0; i < eigs.back().values.size(); ++i)
      top = std::max(top, std::abs(eigs.back().values(i)));
  }
  // Support cutoff is relative to the largest eigenvalue of the whole element.
  const double cut = eps * top;

  std::vector<Mat> blocks;
  blocks.reserve(static_cast<size_t>(a.num_blocks()));
  for (const dense::Eig& eig : eigs) {
    RVec mapped = RVec::Zero(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
      const double lam = eig.values(i);
      const bool zero = std::abs(lam) <= cut;
      switch (fn) {
        case SpectralFn::kSqrt:
          if (lam < -cut)
            throw PreconditionError("sqrt: negative eigenvalue in spectrum");
          mapped(i) = zero ? 0.0 : std::sqrt(lam);
          break;
        case SpectralFn::kInvSqrt:
          if (lam < -cut)
            throw PreconditionError("inv_sqrt: negative eigenvalue in spectrum");
          mapped(i) = zero ? 0.0 : 1.0 / std::sqrt(lam);
          break;
        case SpectralFn::kInv:
          if (zero)
            throw PreconditionError("inv: zero eigenvalue, element not invertible");
          mapped(i) = 1.0 / lam;
          break;
        case SpectralFn::kLog:
          if (zero || lam < 0.0)
            throw PreconditionError("log: spectrum must be strictly positive");
          mapped(i) = std::log(lam);
          break;
        case SpectralFn::kPinv:
          mapped(i) = zero ? 0.0 : 1.0 / lam;
          break;
        case SpectralFn::kSupport:
          mapped(i) = zero ? 0.0 : 1.0;
          break;
      }
    }
    blocks.push_back(eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint());
  }
  return AlgebraElement(std::move(blocks));
}

AlgebraElement sqrt(const AlgebraElement& a) { return apply_spectral(a, SpectralFn::kSqrt); }
AlgebraElement inv_sqrt(const AlgebraElement& a) { return apply_spectral(a, SpectralFn::kInvSqrt); }
AlgebraElement inv(const AlgebraElement& a) { return apply_spectral(a, SpectralFn::kInv); }
AlgebraElement log(const AlgebraElement& a) { return apply_spectral(a, SpectralFn::kLog); }
AlgebraElement pinv(const AlgebraElement& a) { return apply_spectral(a, SpectralFn::kPinv); }
AlgebraElement support(const AlgebraElement& a) { return apply_spectral(a, SpectralFn::kSupport); }

bool is_hermitian(const AlgebraElement& a, double tol) {
  return (a - a.adjoint()).norm() <= tol;
}

bool is_positive(const AlgebraElement& a, double tol) {
  if (!is_hermitian(a, tol)) return false;
  for (int s = 0; s < a.num_blocks(); ++s) {
    const dense::Eig eig = dense::hermitian_eig(a.block(s));
    if (eig.values.size() > 0 && eig.values(0) < -tol) return false;
  }
  return true;
}

bool is_projection(const AlgebraElement& a, double tol) {
  return is_hermitian(a, tol) && (a * a - a).norm() <= tol;
}

bool is_unitary(const AlgebraElement& a, double tol) {
  AlgebraElement id = a;
  for (int s = 0; s < id.num_blocks(); ++s)
    id.block(s) = Mat::Identity(a.block(s).rows(), a.block(s).cols());
  return (a * a.adjoint() - id).norm() <= tol &&
         (a.adjoint() * a - id).norm() <= tol;
}

std::vector<int> block_ranks(const AlgebraElement& a, double eps) {
  std::vector<int> r;
  r.reserve(static_cast<size_t>(a.num_blocks()));
  for (int s = 0; s < a.num_blocks(); ++s) r.push_back(dense::rank(a.block(s), eps));
  return r;
}

}  // namespace cstarmod
