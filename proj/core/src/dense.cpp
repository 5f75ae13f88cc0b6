#include "cstarmod/dense.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace cstarmod::dense {

double op_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return op_norm(m - m.adjoint()) <= tol;
}

Eig hermitian_eig(const Mat& m) {
  const Mat sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  return {es.eigenvalues(), es.eigenvectors()};
}

int rank(const Mat& m, double eps) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = eps * std::max(sv(0), 1.0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

Mat pinv(const Mat& m, double eps) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  if (sv.size() > 0 && sv(0) > 0.0) {
    const double cut = eps * std::max(sv(0), 1.0);
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > cut) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Mat range_basis(const Mat& m, double eps) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int r = 0;
  if (sv.size() > 0 && sv(0) > 0.0) {
    const double cut = eps * std::max(sv(0), 1.0);
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > cut) ++r;
  }
  return svd.matrixU().leftCols(r);
}

Mat projection_range_basis(const Mat& p) {
  const Eig eig = hermitian_eig(p);
  int r = 0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > 0.5) ++r;
  return eig.vectors.rightCols(r);
}

Mat row_space_projection(const Mat& g, double eps) {
  const Mat basis = range_basis(g.adjoint(), eps);
  return basis * basis.adjoint();
}

Mat kernel_row_projection(const Mat& b, double eps) {
  return zero_spectral_projection(b * b.adjoint(), eps);
}

Mat zero_spectral_projection(const Mat& h, double eps) {
  const Eig eig = hermitian_eig(h);
  double top = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    top = std::max(top, std::abs(eig.values(i)));
  const double cut = eps * std::max(top, 1.0);
  Mat out = Mat::Zero(h.rows(), h.cols());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (std::abs(eig.values(i)) <= cut)
      out += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
  return out;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace cstarmod::dense
