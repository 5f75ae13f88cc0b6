#pragma once

#include <vector>

#include "cstarmod/algebra.hpp"
#include "cstarmod/module.hpp"
#include "cstarmod/types.hpp"

namespace cstarmod {

// Finite chain complex of modules over one algebra.  modules holds C_0 .. C_L;
// differentials holds d_1 .. d_L where d_p maps C_p into C_{p-1} and acts on
// the right, so its matrix has modules[p].ambient_rank rows.
struct ChainComplex {
  std::vector<ModuleSpec> modules;
  std::vector<OperatorMatrix> differentials;

  int length() const { return static_cast<int>(modules.size()) - 1; }
  const AlgebraSpec& algebra() const { return modules.front().algebra; }

  // Shapes, compression d = P d P, and d.d = 0, reported with the offending
  // degree.  Throws InputError.
  void validate(double tol = kStructTol) const;
};

// Laplacian at degree p: d_p d_p^dag + d_{p+1}^dag d_{p+1}, an operator on C_p.
OperatorMatrix laplacian(const ChainComplex& c, int p);

struct BettiNumber {
  CenterElement center;
  double scalar = 0.0;
};

// Kernel dimension of the degree-p Laplacian restricted to the module, as a
// center-valued and a scalar dimension.
BettiNumber l2_betti(const ChainComplex& c, int p);

// One step of the spectral distribution function of the degree-p Laplacian.
// mass is the trace weight carried by this eigenvalue, cumulative the value of
// the distribution function there.  Eigenvalues within 1e-12 are merged and
// kernel values are reported as exactly 0.
struct DensityPoint {
  double lambda = 0.0;
  double mass = 0.0;
  double cumulative = 0.0;
};

std::vector<DensityPoint> spectral_density(const ChainComplex& c, int p);

// Decay data of the spectral distribution near zero.  A finite-dimensional
// Laplacian has a spectral gap above the kernel, so the decay exponent is
// always infinite; the gap itself is the least nonzero eigenvalue (infinity
// when the restricted spectrum is all kernel or empty).
struct NovikovShubin {
  bool infinite_exponent = true;
  double spectral_gap = 0.0;
};

NovikovShubin novikov_shubin(const ChainComplex& c, int p);

// Trace-weighted determinant of a positive operator restricted to the module:
// exp of the trace of the logarithm over the restricted spectrum.  Requires t
// self-adjoint, compressed to the module, and strictly positive there; a zero
// module gives 1.  Throws PreconditionError otherwise.
double fk_determinant(const ModuleSpec& m, const OperatorMatrix& t,
                      double tol = kDefaultTol);

struct EulerCharacteristic {
  double from_dimensions = 0.0;
  double from_betti = 0.0;
  CenterElement center_from_dimensions;
  CenterElement center_from_betti;
};

// Alternating sums of the module dimensions and of the Betti numbers; these
// agree for every valid complex.
EulerCharacteristic euler_characteristic(const ChainComplex& c);

}  // namespace cstarmod
