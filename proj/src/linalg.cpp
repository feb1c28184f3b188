#include "dilatrix/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace dilatrix::linalg {

namespace {

using EMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                           Eigen::RowMajor>;

EMat to_eigen(const ComplexMatrix& a) {
  return Eigen::Map<const EMat>(a.data(), static_cast<Eigen::Index>(a.rows()),
                                static_cast<Eigen::Index>(a.cols()));
}

ComplexMatrix from_eigen(const EMat& m) {
  ComplexMatrix a(static_cast<std::size_t>(m.rows()),
                  static_cast<std::size_t>(m.cols()));
  Eigen::Map<EMat>(a.data(), m.rows(), m.cols()) = m;
  return a;
}

}  // namespace

HermEig herm_eig(const ComplexMatrix& a) {
  require(a.is_square(), ErrorCode::shape_mismatch, "herm_eig needs square");
  if (a.rows() == 0) return {{}, ComplexMatrix()};
  EMat m = to_eigen(a);
  EMat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<EMat> es(h);
  require(es.info() == Eigen::Success, ErrorCode::numeric_failure,
          "hermitian eigendecomposition failed");
  HermEig out;
  out.values.assign(es.eigenvalues().data(),
                    es.eigenvalues().data() + es.eigenvalues().size());
  out.vectors = from_eigen(es.eigenvectors());
  return out;
}

double op_norm(const ComplexMatrix& a) {
  if (a.empty()) return 0.0;
  EMat m = to_eigen(a);
  if (std::min(m.rows(), m.cols()) == 1) return m.norm();
  Eigen::JacobiSVD<EMat> svd(m);
  return svd.singularValues()(0);
}

double smallest_singular_value(const ComplexMatrix& a) {
  if (a.empty()) return 0.0;
  EMat m = to_eigen(a);
  Eigen::JacobiSVD<EMat> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

std::vector<cplx> eigenvalues(const ComplexMatrix& a) {
  require(a.is_square(), ErrorCode::shape_mismatch, "eigenvalues needs square");
  if (a.rows() == 0) return {};
  Eigen::ComplexEigenSolver<EMat> es(to_eigen(a), /*computeEigenvectors=*/false);
  require(es.info() == Eigen::Success, ErrorCode::numeric_failure,
          "eigenvalue computation failed");
  std::vector<cplx> out(es.eigenvalues().data(),
                        es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

double spectral_radius(const ComplexMatrix& a) {
  double r = 0.0;
  for (const auto& l : eigenvalues(a)) r = std::max(r, std::abs(l));
  return r;
}

Schur schur(const ComplexMatrix& a) {
  require(a.is_square(), ErrorCode::shape_mismatch, "schur needs square");
  if (a.rows() == 0) return {ComplexMatrix(), ComplexMatrix()};
  Eigen::ComplexSchur<EMat> cs(to_eigen(a), /*computeU=*/true);
  require(cs.info() == Eigen::Success, ErrorCode::numeric_failure,
          "Schur decomposition failed");
  return {from_eigen(cs.matrixU()), from_eigen(cs.matrixT())};
}

ComplexMatrix solve_right(const ComplexMatrix& a, const ComplexMatrix& b) {
  // X*A = B  <=>  A^H X^H = B^H, least squares on the tall side.
  require(a.cols() == b.cols(), ErrorCode::shape_mismatch,
          "solve_right column mismatch");
  if (a.rows() == 0 || b.rows() == 0)
    return ComplexMatrix(b.rows(), a.rows());
  EMat ah = to_eigen(a).adjoint();
  EMat bh = to_eigen(b).adjoint();
  EMat xh = ah.completeOrthogonalDecomposition().solve(bh);
  return from_eigen(EMat(xh.adjoint()));
}

ComplexMatrix linsolve(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.is_square() && a.rows() == b.rows(), ErrorCode::shape_mismatch,
          "linsolve shape mismatch");
  EMat x = to_eigen(a).partialPivLu().solve(to_eigen(b));
  return from_eigen(x);
}

ComplexMatrix closest_unitary(const ComplexMatrix& a) {
  require(a.is_square(), ErrorCode::shape_mismatch,
          "closest_unitary needs square");
  if (a.rows() == 0) return a;
  Eigen::JacobiSVD<EMat> svd(to_eigen(a),
                             Eigen::ComputeFullU | Eigen::ComputeFullV);
  return from_eigen(EMat(svd.matrixU() * svd.matrixV().adjoint()));
}

ComplexMatrix pinv(const ComplexMatrix& a, double sv_tol) {
  if (a.empty()) return ComplexMatrix(a.cols(), a.rows());
  EMat m = to_eigen(a);
  Eigen::JacobiSVD<EMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::VectorXd inv(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    inv(i) = sv(i) > sv_tol ? 1.0 / sv(i) : 0.0;
  EMat out = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
  return from_eigen(out);
}

ComplexMatrix range_basis(const ComplexMatrix& a, double tol) {
  if (a.empty()) return ComplexMatrix(a.rows(), 0);
  EMat m = to_eigen(a);
  Eigen::ColPivHouseholderQR<EMat> qr(m);
  qr.setThreshold(Eigen::Default);
  // Absolute threshold on the R diagonal.
  Eigen::Index rank = 0;
  const Eigen::Index kmax = std::min(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < kmax; ++i)
    if (std::abs(qr.matrixR()(i, i)) > tol) ++rank;
  if (rank == 0) return ComplexMatrix(a.rows(), 0);
  EMat q = qr.householderQ() * EMat::Identity(m.rows(), rank);
  return from_eigen(q);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a, double psd_tol, const char* who,
                       double* min_eig) {
  HermEig eig = herm_eig(a);
  const std::size_t n = a.rows();
  double mn = 0.0;
  for (double v : eig.values) mn = std::min(mn, v);
  if (min_eig) *min_eig = mn;
  require(mn >= -psd_tol, ErrorCode::not_a_contraction,
          std::string(who) + ": negative eigenvalue " + std::to_string(mn));
  ComplexMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = eig.values[i];
    d(i, i) = v > 0.0 ? std::sqrt(v) : 0.0;
  }
  return eig.vectors * d * eig.vectors.adjoint();
}

}  // namespace dilatrix::linalg
