#include "cstarmod/module.hpp"

#include <cmath>
#include <sstream>

#include "cstarmod/dense.hpp"

namespace cstarmod {

ModuleVector ModuleVector::zero(const AlgebraSpec& spec, int n) {
  std::vector<AlgebraElement> entries(static_cast<size_t>(n),
                                      AlgebraElement::zero(spec));
  return ModuleVector(std::move(entries));
}

ModuleVector ModuleVector::basis(const AlgebraSpec& spec, int n, int i) {
  ModuleVector x = zero(spec, n);
  x.entry(i) = AlgebraElement::identity(spec);
  return x;
}

double ModuleVector::norm() const {
  return std::sqrt(inner_product(*this, *this).norm());
}

ModuleVector& ModuleVector::operator+=(const ModuleVector& o) {
  if (length() != o.length())
    throw ShapeError("module vectors have different lengths");
  for (int i = 0; i < length(); ++i) entry(i) += o.entry(i);
  return *this;
}

ModuleVector& ModuleVector::operator-=(const ModuleVector& o) {
  if (length() != o.length())
    throw ShapeError("module vectors have different lengths");
  for (int i = 0; i < length(); ++i) entry(i) -= o.entry(i);
  return *this;
}

ModuleVector operator+(ModuleVector a, const ModuleVector& b) { return a += b; }
ModuleVector operator-(ModuleVector a, const ModuleVector& b) { return a -= b; }

ModuleVector operator*(const AlgebraElement& a, const ModuleVector& x) {
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(x.length()));
  for (int i = 0; i < x.length(); ++i) entries.push_back(a * x.entry(i));
  return ModuleVector(std::move(entries));
}

ModuleVector operator*(const cplx& c, const ModuleVector& x) {
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(x.length()));
  for (int i = 0; i < x.length(); ++i) entries.push_back(c * x.entry(i));
  return ModuleVector(std::move(entries));
}

AlgebraElement inner_product(const ModuleVector& x, const ModuleVector& y) {
  if (x.length() != y.length() || x.length() == 0)
    throw ShapeError("inner_product: tuple lengths differ or are zero");
  AlgebraElement acc = x.entry(0) * y.entry(0).adjoint();
  for (int i = 1; i < x.length(); ++i) acc += x.entry(i) * y.entry(i).adjoint();
  return acc;
}

cplx scalar_inner_product(const AlgebraSpec& spec, const ModuleVector& x,
                          const ModuleVector& y) {
  return trace_state(spec, inner_product(x, y));
}

OperatorMatrix::OperatorMatrix(int rows, int cols,
                               std::vector<AlgebraElement> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ < 1 || cols_ < 1 ||
      entries_.size() != static_cast<size_t>(rows_) * static_cast<size_t>(cols_))
    throw ShapeError("operator matrix: entry count does not match shape");
  for (const AlgebraElement& e : entries_)
    if (!e.shape_matches(entries_.front()))
      throw ShapeError("operator matrix: entries over different block structures");
}

OperatorMatrix OperatorMatrix::zero(const AlgebraSpec& spec, int rows, int cols) {
  std::vector<AlgebraElement> entries(
      static_cast<size_t>(rows) * static_cast<size_t>(cols),
      AlgebraElement::zero(spec));
  return OperatorMatrix(rows, cols, std::move(entries));
}

OperatorMatrix OperatorMatrix::identity(const AlgebraSpec& spec, int n) {
  OperatorMatrix m = zero(spec, n, n);
  for (int i = 0; i < n; ++i) m.entry(i, i) = AlgebraElement::identity(spec);
  return m;
}

OperatorMatrix OperatorMatrix::diagonal(std::vector<AlgebraElement> diag) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) throw ShapeError("diagonal operator matrix needs entries");
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        entries.push_back(diag[static_cast<size_t>(i)]);
      } else {
        AlgebraElement z = diag[static_cast<size_t>(i)];
        for (int s = 0; s < z.num_blocks(); ++s) z.block(s).setZero();
        entries.push_back(std::move(z));
      }
    }
  return OperatorMatrix(n, n, std::move(entries));
}

OperatorMatrix OperatorMatrix::adjoint() const {
  std::vector<AlgebraElement> entries;
  entries.reserve(entries_.size());
  for (int j = 0; j < cols_; ++j)
    for (int i = 0; i < rows_; ++i) entries.push_back(entry(i, j).adjoint());
  return OperatorMatrix(cols_, rows_, std::move(entries));
}

double OperatorMatrix::norm() const {
  const UnfoldedPicture pic = unfold(*this);
  double m = 0.0;
  for (const Mat& b : pic.blocks) m = std::max(m, dense::op_norm(b));
  return m;
}

bool OperatorMatrix::shape_matches(const AlgebraSpec& spec) const {
  return !entries_.empty() && entries_.front().shape_matches(spec);
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("operator matrix addition: shape mismatch");
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(a.rows()) * static_cast<size_t>(a.cols()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) entries.push_back(a.entry(i, j) + b.entry(i, j));
  return OperatorMatrix(a.rows(), a.cols(), std::move(entries));
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  return a + cplx(-1.0, 0.0) * b;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.cols() != b.rows())
    throw ShapeError("operator matrix product: inner dimensions differ");
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(a.rows()) * static_cast<size_t>(b.cols()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      AlgebraElement acc = a.entry(i, 0) * b.entry(0, j);
      for (int t = 1; t < a.cols(); ++t) acc += a.entry(i, t) * b.entry(t, j);
      entries.push_back(std::move(acc));
    }
  return OperatorMatrix(a.rows(), b.cols(), std::move(entries));
}

OperatorMatrix operator*(const cplx& c, const OperatorMatrix& a) {
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(a.rows()) * static_cast<size_t>(a.cols()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) entries.push_back(c * a.entry(i, j));
  return OperatorMatrix(a.rows(), a.cols(), std::move(entries));
}

ModuleVector apply(const ModuleVector& x, const OperatorMatrix& m) {
  if (x.length() != m.rows())
    throw ShapeError("apply: tuple length does not match operator rows");
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(m.cols()));
  for (int j = 0; j < m.cols(); ++j) {
    AlgebraElement acc = x.entry(0) * m.entry(0, j);
    for (int i = 1; i < m.rows(); ++i) acc += x.entry(i) * m.entry(i, j);
    entries.push_back(std::move(acc));
  }
  return ModuleVector(std::move(entries));
}

UnfoldedPicture unfold(const ModuleVector& x) {
  if (x.length() == 0) throw ShapeError("unfold: empty tuple");
  UnfoldedPicture pic;
  pic.kind = UnfoldedPicture::Kind::kVector;
  pic.rows = x.length();
  pic.cols = 1;
  const int num_blocks = x.entry(0).num_blocks();
  for (int s = 0; s < num_blocks; ++s) {
    const int ns = static_cast<int>(x.entry(0).block(s).rows());
    pic.block_sizes.push_back(ns);
    Mat b(ns, static_cast<Eigen::Index>(x.length()) * ns);
    for (int i = 0; i < x.length(); ++i)
      b.block(0, static_cast<Eigen::Index>(i) * ns, ns, ns) = x.entry(i).block(s);
    pic.blocks.push_back(std::move(b));
  }
  return pic;
}

UnfoldedPicture unfold(const OperatorMatrix& m) {
  UnfoldedPicture pic;
  pic.kind = UnfoldedPicture::Kind::kOperator;
  pic.rows = m.rows();
  pic.cols = m.cols();
  const int num_blocks = m.entry(0, 0).num_blocks();
  for (int s = 0; s < num_blocks; ++s) {
    const int ns = static_cast<int>(m.entry(0, 0).block(s).rows());
    pic.block_sizes.push_back(ns);
    Mat b(static_cast<Eigen::Index>(m.rows()) * ns,
          static_cast<Eigen::Index>(m.cols()) * ns);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        b.block(static_cast<Eigen::Index>(i) * ns,
                static_cast<Eigen::Index>(j) * ns, ns, ns) = m.entry(i, j).block(s);
    pic.blocks.push_back(std::move(b));
  }
  return pic;
}

ModuleVector refold_vector(const UnfoldedPicture& pic) {
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(pic.rows));
  for (int i = 0; i < pic.rows; ++i) {
    std::vector<Mat> blocks;
    blocks.reserve(pic.block_sizes.size());
    for (size_t s = 0; s < pic.block_sizes.size(); ++s) {
      const int ns = pic.block_sizes[s];
      blocks.push_back(pic.blocks[s].block(0, static_cast<Eigen::Index>(i) * ns, ns, ns));
    }
    entries.emplace_back(std::move(blocks));
  }
  return ModuleVector(std::move(entries));
}

OperatorMatrix refold_operator(const UnfoldedPicture& pic) {
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(pic.rows) * static_cast<size_t>(pic.cols));
  for (int i = 0; i < pic.rows; ++i)
    for (int j = 0; j < pic.cols; ++j) {
      std::vector<Mat> blocks;
      blocks.reserve(pic.block_sizes.size());
      for (size_t s = 0; s < pic.block_sizes.size(); ++s) {
        const int ns = pic.block_sizes[s];
        blocks.push_back(pic.blocks[s].block(static_cast<Eigen::Index>(i) * ns,
                                             static_cast<Eigen::Index>(j) * ns, ns,
                                             ns));
      }
      entries.emplace_back(std::move(blocks));
    }
  return OperatorMatrix(pic.rows, pic.cols, std::move(entries));
}

OperatorMatrix rank_one_operator(const ModuleVector& x, const ModuleVector& y) {
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(x.length()) * static_cast<size_t>(y.length()));
  for (int i = 0; i < x.length(); ++i)
    for (int j = 0; j < y.length(); ++j)
      entries.push_back(x.entry(i).adjoint() * y.entry(j));
  return OperatorMatrix(x.length(), y.length(), std::move(entries));
}

void ModuleSpec::validate(double tol) const {
  algebra.validate();
  if (ambient_rank < 1) throw InputError("module: ambient rank must be >= 1");
  if (projection.rows() != ambient_rank || projection.cols() != ambient_rank)
    throw InputError("module: projection shape does not match ambient rank");
  if (!projection.shape_matches(algebra))
    throw InputError("module: projection entries do not match the algebra");
  const double scale = std::max(projection.norm(), 1.0);
  if ((projection - projection.adjoint()).norm() > tol * scale)
    throw InputError("module: projection is not self-adjoint");
  if ((projection * projection - projection).norm() > tol * scale)
    throw InputError("module: projection is not idempotent");
  if (generators) {
    for (size_t g = 0; g < generators->size(); ++g) {
      const ModuleVector& x = (*generators)[g];
      if (x.length() != ambient_rank)
        throw InputError("module: generator length does not match ambient rank");
      const ModuleVector diff = apply(x, projection) - x;
      if (diff.norm() > 1e-8 * std::max(1.0, x.norm())) {
        std::ostringstream os;
        os << "module: generator " << g << " is not fixed by the projection";
        throw InputError(os.str());
      }
    }
    const ModuleSpec span = span_module(algebra, ambient_rank, *generators);
    if (rank_vector(span) != rank_vector(*this))
      throw InputError("module: generators do not span the projection range");
  }
}

ModuleSpec free_module(const AlgebraSpec& spec, int n) {
  return {spec, n, OperatorMatrix::identity(spec, n), std::nullopt};
}

ModuleSpec span_module(const AlgebraSpec& spec, int ambient_rank,
                       const std::vector<ModuleVector>& generators) {
  if (ambient_rank < 1) throw InputError("span: ambient rank must be >= 1");
  UnfoldedPicture pic;
  pic.kind = UnfoldedPicture::Kind::kOperator;
  pic.rows = ambient_rank;
  pic.cols = ambient_rank;
  pic.block_sizes = spec.block_sizes;
  for (int s = 0; s < spec.num_blocks(); ++s) {
    const int ns = spec.block_size(s);
    const Eigen::Index dim = static_cast<Eigen::Index>(ambient_rank) * ns;
    if (generators.empty()) {
      pic.blocks.push_back(Mat::Zero(dim, dim));
      continue;
    }
    Mat stacked(static_cast<Eigen::Index>(generators.size()) * ns, dim);
    for (size_t g = 0; g < generators.size(); ++g) {
      if (generators[g].length() != ambient_rank)
        throw ShapeError("span: generator length does not match ambient rank");
      if (!generators[g].entry(0).shape_matches(spec))
        throw ShapeError("span: generator entries do not match the algebra");
      stacked.middleRows(static_cast<Eigen::Index>(g) * ns, ns) =
          unfold(generators[g]).blocks[static_cast<size_t>(s)];
    }
    pic.blocks.push_back(dense::row_space_projection(stacked));
  }
  return {spec, ambient_rank, refold_operator(pic),
          generators.empty()
              ? std::nullopt
              : std::make_optional(generators)};
}

std::vector<int> rank_vector(const ModuleSpec& m) {
  const UnfoldedPicture pic = unfold(m.projection);
  std::vector<int> r;
  r.reserve(pic.blocks.size());
  for (const Mat& b : pic.blocks) r.push_back(dense::rank(b));
  return r;
}

CenterElement center_valued_dimension(const ModuleSpec& m) {
  const std::vector<int> r = rank_vector(m);
  CenterElement c;
  c.scalars.reserve(r.size());
  for (size_t s = 0; s < r.size(); ++s)
    c.scalars.push_back(cplx(static_cast<double>(r[s]) /
                                 static_cast<double>(m.algebra.block_sizes[s]),
                             0.0));
  return c;
}

double scalar_dimension(const ModuleSpec& m) {
  const std::vector<int> r = rank_vector(m);
  double d = 0.0;
  for (size_t s = 0; s < r.size(); ++s)
    d += m.algebra.trace_weights[s] * static_cast<double>(r[s]);
  return d;
}

namespace {

// Orthonormal range bases of the unfolded projection, one per block.
std::vector<Mat> projection_bases(const ModuleSpec& m) {
  const UnfoldedPicture pic = unfold(m.projection);
  std::vector<Mat> bases;
  bases.reserve(pic.blocks.size());
  for (const Mat& b : pic.blocks) bases.push_back(dense::projection_range_basis(b));
  return bases;
}

}  // namespace

CanonicalDecomposition canonical_decomposition(const ModuleSpec& m) {
  const std::vector<int> r = rank_vector(m);
  const AlgebraSpec& spec = m.algebra;
  int k = 0;
  for (size_t s = 0; s < r.size(); ++s) {
    const int ns = spec.block_sizes[s];
    k = std::max(k, (r[s] + ns - 1) / ns);
  }

  if (k == 0) {
    // Zero module: empty decomposition, standard form is the zero projection
    // in ambient rank one.
    ModuleSpec standard{spec, 1, OperatorMatrix::zero(spec, 1, 1), std::nullopt};
    OperatorMatrix u = OperatorMatrix::zero(spec, m.ambient_rank, 1);
    return {{}, std::move(standard), std::move(u)};
  }

  // Greedy fill: slot i takes, per block, whatever of r_s is left after the
  // first i-1 slots, capped at n_s.  Projections are exact 0/1 diagonals.
  std::vector<AlgebraElement> projections;
  projections.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    AlgebraElement p = AlgebraElement::zero(spec);
    for (int s = 0; s < spec.num_blocks(); ++s) {
      const int ns = spec.block_size(s);
      const int have = std::min(std::max(r[static_cast<size_t>(s)] - i * ns, 0), ns);
      for (int t = 0; t < have; ++t) p.block(s)(t, t) = cplx(1.0, 0.0);
    }
    projections.push_back(std::move(p));
  }

  ModuleSpec standard{spec, k, OperatorMatrix::diagonal(projections), std::nullopt};
  std::vector<ModuleVector> tuple;
  tuple.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    ModuleVector x = ModuleVector::zero(spec, k);
    x.entry(i) = projections[static_cast<size_t>(i)];
    tuple.push_back(std::move(x));
  }
  standard.generators = std::move(tuple);

  // Partial isometry between the ranges, blockwise A_s B_s^dag.
  const std::vector<Mat> from = projection_bases(m);
  const std::vector<Mat> to = projection_bases(standard);
  UnfoldedPicture pic;
  pic.kind = UnfoldedPicture::Kind::kOperator;
  pic.rows = m.ambient_rank;
  pic.cols = k;
  pic.block_sizes = spec.block_sizes;
  for (size_t s = 0; s < from.size(); ++s)
    pic.blocks.push_back(from[s] * to[s].adjoint());

  return {std::move(projections), std::move(standard), refold_operator(pic)};
}

bool is_isomorphic(const ModuleSpec& m, const ModuleSpec& n) {
  if (!m.algebra.same_as(n.algebra))
    throw ShapeError("isomorphism test: modules over different algebras");
  return rank_vector(m) == rank_vector(n);
}

OperatorMatrix build_unitary_isomorphism(const ModuleSpec& m, const ModuleSpec& n) {
  if (!is_isomorphic(m, n))
    throw PreconditionError(
        "build_unitary_isomorphism: rank vectors differ, modules are not "
        "isomorphic");
  const CanonicalDecomposition dm = canonical_decomposition(m);
  const CanonicalDecomposition dn = canonical_decomposition(n);
  return dm.to_standard * dn.to_standard.adjoint();
}

}  // namespace cstarmod
