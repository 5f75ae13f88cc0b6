#pragma once

#include <optional>
#include <vector>

#include "cstarmod/algebra.hpp"

namespace cstarmod {

// Row tuple (x_1, ..., x_n) over the algebra.  The algebra acts on the left,
// a . x = (a x_1, ..., a x_n); operator matrices act on the right.
class ModuleVector {
 public:
  ModuleVector() = default;
  explicit ModuleVector(std::vector<AlgebraElement> entries)
      : entries_(std::move(entries)) {}

  static ModuleVector zero(const AlgebraSpec& spec, int n);
  // i-th standard basis tuple e_i (0-based).
  static ModuleVector basis(const AlgebraSpec& spec, int n, int i);

  int length() const { return static_cast<int>(entries_.size()); }
  const AlgebraElement& entry(int i) const { return entries_[static_cast<size_t>(i)]; }
  AlgebraElement& entry(int i) { return entries_[static_cast<size_t>(i)]; }

  // Module norm |<x,x>|^(1/2).
  double norm() const;

  ModuleVector& operator+=(const ModuleVector& o);
  ModuleVector& operator-=(const ModuleVector& o);

 private:
  std::vector<AlgebraElement> entries_;
};

ModuleVector operator+(ModuleVector a, const ModuleVector& b);
ModuleVector operator-(ModuleVector a, const ModuleVector& b);
ModuleVector operator*(const AlgebraElement& a, const ModuleVector& x);  // left action
ModuleVector operator*(const cplx& c, const ModuleVector& x);

// <x,y> = sum_i x_i y_i^*.  Algebra-linear in the first slot.
AlgebraElement inner_product(const ModuleVector& x, const ModuleVector& y);

// tr <x,y>; the scalarized inner product.
cplx scalar_inner_product(const AlgebraSpec& spec, const ModuleVector& x,
                          const ModuleVector& y);

// n x m matrix over the algebra acting on row tuples from the right:
// (x . M)_j = sum_i x_i m_ij.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(int rows, int cols, std::vector<AlgebraElement> entries);

  static OperatorMatrix zero(const AlgebraSpec& spec, int rows, int cols);
  static OperatorMatrix identity(const AlgebraSpec& spec, int n);
  static OperatorMatrix diagonal(std::vector<AlgebraElement> diag);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const AlgebraElement& entry(int i, int j) const {
    return entries_[static_cast<size_t>(i * cols_ + j)];
  }
  AlgebraElement& entry(int i, int j) {
    return entries_[static_cast<size_t>(i * cols_ + j)];
  }

  OperatorMatrix adjoint() const;
  double norm() const;  // operator norm across blocks of the unfolded picture

  bool shape_matches(const AlgebraSpec& spec) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<AlgebraElement> entries_;
};

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(const cplx& c, const OperatorMatrix& a);
ModuleVector apply(const ModuleVector& x, const OperatorMatrix& m);

// Faithful per-block matrix picture.  At block s a length-n tuple becomes the
// n_s x (n*n_s) row-concatenation of its blocks, an n x m operator matrix the
// (n*n_s) x (m*n_s) block matrix.  Composition, adjoints and inner products
// turn into plain matrix algebra there.
struct UnfoldedPicture {
  enum class Kind { kVector, kOperator };
  Kind kind = Kind::kVector;
  int rows = 0, cols = 0;          // tuple length / operator shape
  std::vector<int> block_sizes;    // n_s per algebra block
  std::vector<Mat> blocks;
};

UnfoldedPicture unfold(const ModuleVector& x);
UnfoldedPicture unfold(const OperatorMatrix& m);
ModuleVector refold_vector(const UnfoldedPicture& pic);
OperatorMatrix refold_operator(const UnfoldedPicture& pic);

// x (x) y: the operator z |-> <z, x> y with entries x_i^* y_j.
OperatorMatrix rank_one_operator(const ModuleVector& x, const ModuleVector& y);

// A finitely generated module presented as the range of a projection in the
// free module of the given rank.  Optional generators must span that range.
struct ModuleSpec {
  AlgebraSpec algebra;
  int ambient_rank = 0;
  OperatorMatrix projection;
  std::optional<std::vector<ModuleVector>> generators;

  void validate(double tol = kStructTol) const;
};

ModuleSpec free_module(const AlgebraSpec& spec, int n);

// Smallest projection fixing every generator; its range is their span.
ModuleSpec span_module(const AlgebraSpec& spec, int ambient_rank,
                       const std::vector<ModuleVector>& generators);

// Per-block complex rank of the unfolded projection.  Complete isomorphism
// invariant for these modules.
std::vector<int> rank_vector(const ModuleSpec& m);

CenterElement center_valued_dimension(const ModuleSpec& m);
double scalar_dimension(const ModuleSpec& m);

// Orthogonal decomposition into a diagonal standard form diag(p_1, ..., p_k)
// acting on the free module of rank k, together with the unitary that carries
// the module onto it: to_standard satisfies U U^dag = P, U^dag U = P_std and
// preserves inner products on the module.
struct CanonicalDecomposition {
  std::vector<AlgebraElement> projections;
  ModuleSpec standard;
  OperatorMatrix to_standard;
};
CanonicalDecomposition canonical_decomposition(const ModuleSpec& m);

// True iff the rank vectors coincide (algebras must match).
bool is_isomorphic(const ModuleSpec& m, const ModuleSpec& n);

// Explicit unitary V with V V^dag = P_M, V^dag V = P_N, <xV, yV> = <x, y>.
// Throws PreconditionError when the modules are not isomorphic.
OperatorMatrix build_unitary_isomorphism(const ModuleSpec& m, const ModuleSpec& n);

}  // namespace cstarmod
