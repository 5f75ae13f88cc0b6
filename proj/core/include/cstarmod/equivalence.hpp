#pragma once

#include <cstdint>
#include <vector>

#include "cstarmod/module.hpp"

namespace cstarmod {

// The module seen as a plain complex inner-product space carrying the algebra
// action.  basis is orthogonal with squared lengths equal to the block trace
// weights; unit_actions holds the matrix of every algebra matrix unit in that
// basis (block-major order e^{(s)}_{uv}, row index u fastest last).
struct HilbertianModel {
  int complex_dimension = 0;
  Mat spanning_gram;                  // Gram of the generating family e_uv . (row_a of P)
  Mat basis_gram;                     // Gram of the reduced basis, diagonal
  std::vector<ModuleVector> basis;
  std::vector<Mat> unit_actions;      // one per (s, u, v)
  AlgebraSpec algebra;

  // Flattened index of the action matrix of e^{(s)}_{uv}.
  int unit_index(int s, int u, int v) const;
};

HilbertianModel scalarize(const ModuleSpec& m);

// Reconstruct <x, y> from scalar data: block-s entry (u, v) equals
// <x, e_uv . y>_C / w_s with coordinates taken in the recorded basis.
AlgebraElement gram_from_scalar_data(const HilbertianModel& h,
                                     const Eigen::VectorXcd& x_coords,
                                     const Eigen::VectorXcd& y_coords);

// Coordinates of a module vector in the recorded basis.
Eigen::VectorXcd scalar_coordinates(const HilbertianModel& h, const ModuleVector& x);

// Matrix of a module-endomorphism t (acting on the right, t = P t P) in the
// recorded basis.
Mat scalar_matrix(const HilbertianModel& h, const OperatorMatrix& t);

// Compares the scalarized matrix of the operator adjoint with the adjoint of
// the scalarized matrix taken with respect to the recorded inner product.
// Returns the deviation in operator norm.
double adjoint_consistency_residual(const ModuleSpec& m, const OperatorMatrix& t);

// A positive invertible operator G on the module defining the modified inner
// product <x, y>_G = <x.G, y>.
struct InnerProductForm {
  OperatorMatrix g;
  void validate(const ModuleSpec& m, double tol = kDefaultTol) const;
};

// Positive T on the module with T G2 T = G1; the two modified inner products
// are then linked by <x, y>_1 = <x.T, y.T>_2.
OperatorMatrix link_inner_products(const ModuleSpec& m, const InnerProductForm& g1,
                                   const InnerProductForm& g2);

// residual of the defining identity |T G2 T - G1|.
double linking_residual(const ModuleSpec& m, const OperatorMatrix& t,
                        const InnerProductForm& g1, const InnerProductForm& g2);

// Commutant of the algebra action on the scalarized module, computed by
// solving the linear commutation system, plus its own commutant.  Guarded to
// block dimension sum <= 6 and ambient rank <= 4.
struct CommutantReport {
  std::vector<int> block_commutant_dims;
  std::vector<int> block_bicommutant_dims;
  int commutant_dim = 0;
  int bicommutant_dim = 0;
  int expected_commutant_dim = 0;    // sum r_s^2
  int expected_bicommutant_dim = 0;  // sum over r_s > 0 of n_s^2
  bool pass = false;
};
CommutantReport commutant_check(const ModuleSpec& m);

// Re-embeds the module through random isometries into larger free modules and
// recomputes dimensions; they must not move.
struct InvarianceReport {
  int trials = 0;
  double max_scalar_deviation = 0.0;
  double max_center_deviation = 0.0;
  bool pass = false;
};
InvarianceReport embedding_invariance(const ModuleSpec& m, int trials,
                                      std::uint64_t seed, double tol = 1e-10);

}  // namespace cstarmod
