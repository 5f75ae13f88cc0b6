#include "cstarmod/l2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cstarmod/dense.hpp"
#include "cstarmod/errors.hpp"

namespace cstarmod {

namespace {

// Eigenvalues of a Hermitian operator compressed to the module, taken block by
// block against an orthonormal basis of the projection range.
std::vector<RVec> restricted_spectra(const OperatorMatrix& h, const ModuleSpec& m) {
  const UnfoldedPicture hp = unfold(h);
  const UnfoldedPicture pp = unfold(m.projection);
  std::vector<RVec> out;
  for (size_t s = 0; s < hp.blocks.size(); ++s) {
    const Mat basis = dense::projection_range_basis(pp.blocks[s]);
    if (basis.cols() == 0) {
      out.emplace_back(0);
      continue;
    }
    out.push_back(dense::hermitian_eig(basis.adjoint() * hp.blocks[s] * basis).values);
  }
  return out;
}

double spectra_top(const std::vector<RVec>& spectra) {
  double top = 0.0;
  for (const RVec& v : spectra)
    for (Eigen::Index i = 0; i < v.size(); ++i) top = std::max(top, std::abs(v(i)));
  return top;
}

}  // namespace

void ChainComplex::validate(double tol) const {
  if (modules.empty()) throw InputError("complex: no modules");
  if (differentials.size() + 1 != modules.size())
    throw InputError("complex: need one differential per adjacent pair of modules");
  for (const ModuleSpec& m : modules) {
    m.validate();
    if (!m.algebra.same_as(algebra()))
      throw InputError("complex: modules over different algebras");
  }
  for (size_t i = 0; i < differentials.size(); ++i) {
    const int p = static_cast<int>(i) + 1;
    const OperatorMatrix& d = differentials[i];
    if (d.rows() != modules[i + 1].ambient_rank || d.cols() != modules[i].ambient_rank)
      throw InputError("complex: differential shape mismatch at degree " +
                       std::to_string(p));
    if (!d.shape_matches(algebra()))
      throw InputError("complex: differential entries do not match the algebra at degree " +
                       std::to_string(p));
    const double scale = std::max(d.norm(), 1.0);
    if ((d - modules[i + 1].projection * d * modules[i].projection).norm() >
        tol * scale)
      throw InputError("complex: differential not compressed to the modules at degree " +
                       std::to_string(p));
    if (i > 0) {
      const double square = (d * differentials[i - 1]).norm();
      const double prod_scale =
          std::max(d.norm() * differentials[i - 1].norm(), 1.0);
      if (square > tol * prod_scale)
        throw InputError("complex: differentials do not square to zero at degree " +
                         std::to_string(p));
    }
  }
}

OperatorMatrix laplacian(const ChainComplex& c, int p) {
  if (p < 0 || p > c.length())
    throw InputError("laplacian: degree out of range");
  const int n = c.modules[static_cast<size_t>(p)].ambient_rank;
  OperatorMatrix delta = OperatorMatrix::zero(c.algebra(), n, n);
  if (p >= 1) {
    const OperatorMatrix& d = c.differentials[static_cast<size_t>(p - 1)];
    delta = delta + d * d.adjoint();
  }
  if (p < c.length()) {
    const OperatorMatrix& e = c.differentials[static_cast<size_t>(p)];
    delta = delta + e.adjoint() * e;
  }
  return delta;
}

BettiNumber l2_betti(const ChainComplex& c, int p) {
  const ModuleSpec& m = c.modules[static_cast<size_t>(p)];
  const std::vector<RVec> spectra = restricted_spectra(laplacian(c, p), m);
  const double cut = kRankEps * std::max(spectra_top(spectra), 1.0);

  BettiNumber b;
  b.center.scalars.assign(static_cast<size_t>(m.algebra.num_blocks()), cplx(0, 0));
  for (size_t s = 0; s < spectra.size(); ++s) {
    int kernel = 0;
    for (Eigen::Index i = 0; i < spectra[s].size(); ++i)
      if (std::abs(spectra[s](i)) <= cut) ++kernel;
    b.center.scalars[s] =
        cplx(static_cast<double>(kernel) / m.algebra.block_size(static_cast<int>(s)), 0);
    b.scalar += m.algebra.weight(static_cast<int>(s)) * kernel;
  }
  return b;
}

std::vector<DensityPoint> spectral_density(const ChainComplex& c, int p) {
  const ModuleSpec& m = c.modules[static_cast<size_t>(p)];
  const std::vector<RVec> spectra = restricted_spectra(laplacian(c, p), m);
  const double cut = kRankEps * std::max(spectra_top(spectra), 1.0);

  std::vector<std::pair<double, double>> weighted;
  for (size_t s = 0; s < spectra.size(); ++s) {
    const double w = m.algebra.weight(static_cast<int>(s));
    for (Eigen::Index i = 0; i < spectra[s].size(); ++i) {
      const double lam = spectra[s](i);
      weighted.emplace_back(std::abs(lam) <= cut ? 0.0 : lam, w);
    }
  }
  std::sort(weighted.begin(), weighted.end());

  std::vector<DensityPoint> steps;
  double cumulative = 0.0;
  for (const auto& [lam, w] : weighted) {
    cumulative += w;
    if (!steps.empty() && lam - steps.back().lambda <= 1e-12) {
      steps.back().mass += w;
      steps.back().cumulative = cumulative;
    } else {
      steps.push_back({lam, w, cumulative});
    }
  }
  return steps;
}

NovikovShubin novikov_shubin(const ChainComplex& c, int p) {
  NovikovShubin ns;
  ns.spectral_gap = std::numeric_limits<double>::infinity();
  for (const DensityPoint& step : spectral_density(c, p)) {
    if (step.lambda > 0.0) {
      ns.spectral_gap = step.lambda;
      break;
    }
  }
  return ns;
}

double fk_determinant(const ModuleSpec& m, const OperatorMatrix& t, double tol) {
  m.validate();
  if (t.rows() != m.ambient_rank || t.cols() != m.ambient_rank)
    throw ShapeError("fk: operator shape does not match the module");
  if (!t.shape_matches(m.algebra))
    throw ShapeError("fk: operator entries do not match the algebra");
  const double scale = std::max(t.norm(), 1.0);
  if ((t - t.adjoint()).norm() > tol * scale)
    throw PreconditionError("fk: operator is not self-adjoint");
  if ((t - m.projection * t * m.projection).norm() > tol * scale)
    throw PreconditionError("fk: operator is not compressed to the module");

  const std::vector<RVec> spectra = restricted_spectra(t, m);
  const double cut = kRankEps * std::max(spectra_top(spectra), 1.0);
  double log_sum = 0.0;
  bool any = false;
  for (size_t s = 0; s < spectra.size(); ++s) {
    const double w = m.algebra.weight(static_cast<int>(s));
    for (Eigen::Index i = 0; i < spectra[s].size(); ++i) {
      const double lam = spectra[s](i);
      if (lam <= cut)
        throw PreconditionError("fk: operator is not strictly positive on the module");
      log_sum += w * std::log(lam);
      any = true;
    }
  }
  return any ? std::exp(log_sum) : 1.0;
}

EulerCharacteristic euler_characteristic(const ChainComplex& c) {
  EulerCharacteristic chi;
  const int blocks = c.algebra().num_blocks();
  chi.center_from_dimensions.scalars.assign(static_cast<size_t>(blocks), cplx(0, 0));
  chi.center_from_betti.scalars.assign(static_cast<size_t>(blocks), cplx(0, 0));
  for (int p = 0; p <= c.length(); ++p) {
    const double sign = (p % 2 == 0) ? 1.0 : -1.0;
    chi.from_dimensions += sign * scalar_dimension(c.modules[static_cast<size_t>(p)]);
    const CenterElement cv = center_valued_dimension(c.modules[static_cast<size_t>(p)]);
    const BettiNumber b = l2_betti(c, p);
    chi.from_betti += sign * b.scalar;
    for (int s = 0; s < blocks; ++s) {
      chi.center_from_dimensions.scalars[static_cast<size_t>(s)] +=
          sign * cv.scalars[static_cast<size_t>(s)];
      chi.center_from_betti.scalars[static_cast<size_t>(s)] +=
          sign * b.center.scalars[static_cast<size_t>(s)];
    }
  }
  return chi;
}

}  // namespace cstarmod
