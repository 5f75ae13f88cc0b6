#pragma once

#include "cstarmod/types.hpp"

namespace cstarmod::dense {

// Largest singular value; the operator 2-norm.
double op_norm(const Mat& m);

bool is_hermitian(const Mat& m, double tol);

// Hermitian eigensystem with eigenvalues ascending.  Input is symmetrized
// first so callers may pass matrices that are Hermitian only up to roundoff.
struct Eig {
  RVec values;
  Mat vectors;
};
Eig hermitian_eig(const Mat& m);

// Numerical rank: singular values above eps * max(sigma_max, 1).
int rank(const Mat& m, double eps = kRankEps);

// Moore-Penrose inverse via SVD with relative cutoff.
Mat pinv(const Mat& m, double eps = kRankEps);

// Orthonormal columns spanning the range (column space).
Mat range_basis(const Mat& m, double eps = kRankEps);

// Orthonormal columns spanning the range of a Hermitian projection,
// detected by eigenvalue > 1/2.  Deterministic and exact-rank for inputs
// that actually are projections.
Mat projection_range_basis(const Mat& p);

// Hermitian Q with v*Q = v exactly when the row vector v lies in the row
// span of g.  Equals the orthogonal projection onto range(g^dag).
Mat row_space_projection(const Mat& g, double eps = kRankEps);

// Hermitian Q with v*Q = v exactly when v*b = 0 (row kernel).  Q is the
// zero-eigenvalue spectral projection of b b^dag.
Mat kernel_row_projection(const Mat& b, double eps = kRankEps);

// Spectral projection of Hermitian h onto |lambda| <= eps * max(|lambda|, 1).
Mat zero_spectral_projection(const Mat& h, double eps = kRankEps);

Mat kron(const Mat& a, const Mat& b);

}  // namespace cstarmod::dense
