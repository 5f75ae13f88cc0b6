#pragma once

#include <vector>

#include "cstarmod/errors.hpp"
#include "cstarmod/types.hpp"

namespace cstarmod {

// Block structure of a finite direct sum of full matrix algebras, together
// with the weights of the distinguished faithful trace state.  The weights
// must satisfy sum_s w_s * n_s = 1 so the identity has trace one.
struct AlgebraSpec {
  std::vector<int> block_sizes;
  std::vector<double> trace_weights;

  int num_blocks() const { return static_cast<int>(block_sizes.size()); }
  int block_size(int s) const { return block_sizes[static_cast<size_t>(s)]; }
  double weight(int s) const { return trace_weights[static_cast<size_t>(s)]; }
  int block_dim_sum() const;

  // Throws InputError naming the violated constraint.
  void validate(double tol = kDefaultTol) const;

  bool same_as(const AlgebraSpec& other, double tol = 1e-12) const;

  // The scalars: one block of size 1, weight 1.
  static AlgebraSpec scalar();
  // Single full matrix block M_n with the normalized trace.
  static AlgebraSpec full_matrix(int n);
  // Uniform weights w_s = 1 / (S * n_s) ... normalized so the sum rule holds.
  static AlgebraSpec with_uniform_weights(std::vector<int> block_sizes);
};

// One scalar per block; the generic central element c_s * I_{n_s}.
struct CenterElement {
  std::vector<cplx> scalars;

  int num_blocks() const { return static_cast<int>(scalars.size()); }
  CenterElement& operator+=(const CenterElement& o);
  CenterElement& operator-=(const CenterElement& o);
  double max_abs() const;
};
CenterElement operator+(CenterElement a, const CenterElement& b);
CenterElement operator-(CenterElement a, const CenterElement& b);
double center_distance(const CenterElement& a, const CenterElement& b);

// An element of the algebra: one dense complex matrix per block.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(std::vector<Mat> blocks) : blocks_(std::move(blocks)) {}

  static AlgebraElement zero(const AlgebraSpec& spec);
  static AlgebraElement identity(const AlgebraSpec& spec);
  // Matrix unit e_{uv} in block s, zero elsewhere (0-based indices).
  static AlgebraElement matrix_unit(const AlgebraSpec& spec, int s, int u, int v);

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Mat& block(int s) const { return blocks_[static_cast<size_t>(s)]; }
  Mat& block(int s) { return blocks_[static_cast<size_t>(s)]; }

  bool shape_matches(const AlgebraSpec& spec) const;
  bool shape_matches(const AlgebraElement& other) const;

  AlgebraElement adjoint() const;

  // C*-norm: the largest singular value across blocks.
  double norm() const;

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);

 private:
  std::vector<Mat> blocks_;
};

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(const cplx& c, const AlgebraElement& a);
AlgebraElement operator*(const AlgebraElement& a, const cplx& c);

// tr(a) = sum_s w_s * Tr(a_s).  Faithful: tr(a* a) >= (min_s w_s) * |a|^2.
cplx trace_state(const AlgebraSpec& spec, const AlgebraElement& a);

// Center-valued trace, blockwise Tr(a_s) / n_s.  Weight-independent.
CenterElement center_valued_trace(const AlgebraElement& a);

// c |-> (c_1 I_{n_1}, ..., c_S I_{n_S}).
AlgebraElement embed_center(const AlgebraSpec& spec, const CenterElement& c);

// Functions of a Hermitian element through its eigenvalues.  Eigenvalues with
// |lambda| <= eps * max |lambda| count as zero.  sqrt and inv_sqrt clamp such
// dust to zero and reject genuinely negative spectrum; inv and log reject any
// zero eigenvalue (log also negatives); pinv inverts the nonzero part;
// support projects onto it.
enum class SpectralFn { kSqrt, kInvSqrt, kInv, kLog, kPinv, kSupport };
AlgebraElement apply_spectral(const AlgebraElement& a, SpectralFn fn,
                              double eps = kRankEps);

AlgebraElement sqrt(const AlgebraElement& a);
AlgebraElement inv_sqrt(const AlgebraElement& a);
AlgebraElement inv(const AlgebraElement& a);
AlgebraElement log(const AlgebraElement& a);
AlgebraElement pinv(const AlgebraElement& a);
AlgebraElement support(const AlgebraElement& a);

bool is_hermitian(const AlgebraElement& a, double tol = kDefaultTol);
bool is_positive(const AlgebraElement& a, double tol = kDefaultTol);
bool is_projection(const AlgebraElement& a, double tol = kDefaultTol);
bool is_unitary(const AlgebraElement& a, double tol = kDefaultTol);

// Rank of each block, nonzero eigenvalues counted with the support threshold.
std::vector<int> block_ranks(const AlgebraElement& a, double eps = kRankEps);

}  // namespace cstarmod
