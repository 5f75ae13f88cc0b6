#pragma once

#include <vector>

#include "cstarmod/module.hpp"

namespace cstarmod {

// A finite generating tuple for a module; the raw material for frame and
// Riesz-basis analysis.
struct FrameSet {
  ModuleSpec module;
  std::vector<ModuleVector> elements;

  int size() const { return static_cast<int>(elements.size()); }

  // Elements must lie in the module and span it.  Throws InputError.
  void validate(double tol = kDefaultTol) const;
};

using GramMatrix = OperatorMatrix;

// g_ij = <x_i, x_j>.  Self-adjoint and positive in the matrix algebra over A.
GramMatrix gram(const FrameSet& f);

// S = sum_i x_i (x) x_i, so x.S = sum_i <x, x_i> x_i.  Vanishes on the
// orthogonal complement of the module and commutes with its projection.
OperatorMatrix frame_operator(const FrameSet& f);

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Extreme eigenvalues of the frame operator restricted to the module, taken
// across all blocks.  A vanishing lower bound means the elements fail to
// generate and is reported as an error.
FrameBounds frame_bounds(const FrameSet& f);

// Frame operator equals the module projection within tol.
bool is_normalized_tight(const FrameSet& f, double tol = kDefaultTol);

// x . S; equals x up to tol exactly when the frame is normalized tight.
ModuleVector reconstruct(const FrameSet& f, const ModuleVector& x);

// y_i = x_i . S^(-1/2) (inverse square root on the module).  The result is a
// normalized tight frame of the same module.
FrameSet canonical_tight(const FrameSet& f);

// G = S^+ on the module.  The modified inner product <x.G, y> makes the
// original elements a normalized tight frame, and G is the unique positive
// operator on the module doing so.
OperatorMatrix retightening_form(const FrameSet& f);

// Max over i of the tightness defect | <x.G, x> - sum_i <x.G, x_i><x_i.G, x> |
// probed on the frame elements themselves plus optional extra vectors.
double retightening_residual(const FrameSet& f, const OperatorMatrix& g,
                             const std::vector<ModuleVector>& probes);

// Same length, all elements nonzero, Gram entries equal within tol.
bool frames_equal_gram(const FrameSet& f, const FrameSet& g, double tol = kDefaultTol);

// For two normalized tight frames with equal Gram matrices, the operator
// V = sum_i x_i (x) y_i restricts to a unitary from the first module onto the
// second carrying x_i to y_i.  Throws PreconditionError otherwise.
OperatorMatrix unitary_from_matched_frames(const FrameSet& f, const FrameSet& g,
                                           double tol = kDefaultTol);

// Kernel test: the synthesis map b |-> sum_i b_i x_i must have kernel exactly
// the direct sum of the complements of the support projections of <x_i, x_i>.
// The containment holds automatically; equality is a per-block dimension count.
bool is_riesz_basis(const FrameSet& f);

// Coefficient matrices between two Riesz bases of the same module:
// y_i = sum_j c_ij x_j and x_j = sum_i d_ji y_i, minimal-norm solutions with
// entries compressed by the support projections on both sides.  The products
// C D and D C are then diagonal with those supports on the diagonal, and each
// matrix is the Moore-Penrose inverse of the other.
struct TransferMatrices {
  OperatorMatrix c;  // size of y times size of x
  OperatorMatrix d;  // size of x times size of y
};
TransferMatrices transfer_matrices(const FrameSet& x_basis, const FrameSet& y_basis,
                                   double tol = kDefaultTol);

// Blockwise Moore-Penrose inverse of an operator matrix (any shape).
OperatorMatrix moore_penrose_matrix(const OperatorMatrix& m);

struct TransferMpReport {
  double d_vs_pinv_c = 0.0;
  double c_vs_pinv_d = 0.0;
  double penrose_cdc = 0.0;   // |C D C - C|
  double penrose_dcd = 0.0;   // |D C D - D|
  double penrose_cd_sa = 0.0; // |(C D)^dag - C D|
  double penrose_dc_sa = 0.0; // |(D C)^dag - D C|
  bool pass = false;
  double max_residual() const;
};
TransferMpReport verify_transfer_mp(const OperatorMatrix& c, const OperatorMatrix& d,
                                    double tol = kDefaultTol);

}  // namespace cstarmod
