#include "dilatrix/opcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dilatrix/linalg.hpp"

namespace dilatrix {

ComplexMatrix ContractionTuple::product() const {
  require(!ops.empty(), ErrorCode::invalid_argument, "empty tuple");
  ComplexMatrix p = ops[0];
  for (std::size_t i = 1; i < ops.size(); ++i) p = p * ops[i];
  return p;
}

Certificate ContractionTuple::validate(const Tolerances& tol) const {
  require(!ops.empty(), ErrorCode::invalid_argument, "empty tuple");
  std::vector<double> norms(ops.size());
  Certificate cert;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& t = ops[i];
    require(t.rows() == dim && t.cols() == dim, ErrorCode::shape_mismatch,
            "tuple operator has wrong size");
    require(t.all_finite(), ErrorCode::invalid_argument,
            "tuple operator has non-finite entries");
    norms[i] = linalg::op_norm(t);
    cert.add("contractivity[" + std::to_string(i) + "]",
             std::max(0.0, norms[i] - 1.0), tol.norm_tol);
  }
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      const double scale = std::max(1.0, norms[i] * norms[j]);
      const double r =
          linalg::op_norm(ops[i] * ops[j] - ops[j] * ops[i]) / scale;
      cert.add("commutation[" + std::to_string(i) + "][" + std::to_string(j) +
                   "]",
               r, tol.comm_tol);
    }
  return cert;
}

Defect defect(const ComplexMatrix& t, const Tolerances& tol) {
  require(t.is_square(), ErrorCode::shape_mismatch, "defect needs square");
  const std::size_t n = t.rows();
  ComplexMatrix a = ComplexMatrix::identity(n) - t * t.adjoint();
  linalg::HermEig eig = linalg::herm_eig(a);

  double mn = 0.0;
  for (double v : eig.values) mn = std::min(mn, v);
  require(mn >= -tol.psd_tol, ErrorCode::not_a_contraction,
          "defect: I - T T* has eigenvalue " + std::to_string(mn));

  Defect out;
  out.min_eigenvalue = mn;
  ComplexMatrix d(n, n);
  std::size_t rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = eig.values[i];
    d(i, i) = v > 0.0 ? std::sqrt(v) : 0.0;
    if (v > tol.rank_tol) ++rank;
  }
  out.sqrt = eig.vectors * d * eig.vectors.adjoint();
  out.rank = rank;
  // Eigenvalues ascend, so the defect directions are the trailing columns;
  // order them by descending eigenvalue.
  out.basis = ComplexMatrix(n, rank);
  for (std::size_t c = 0; c < rank; ++c) {
    const std::size_t src = n - 1 - c;
    for (std::size_t r = 0; r < n; ++r)
      out.basis(r, c) = eig.vectors(r, src);
  }
  return out;
}

ComplexMatrix szego_inverse(const ContractionTuple& tuple,
                            const std::vector<std::size_t>& subset) {
  require(!subset.empty(), ErrorCode::invalid_argument,
          "szego_inverse needs a nonempty index set");
  for (std::size_t idx : subset)
    require(idx < tuple.n(), ErrorCode::invalid_argument,
            "szego_inverse index out of range");

  const std::size_t k = subset.size();
  ComplexMatrix acc = ComplexMatrix::identity(tuple.dim);  // G = {} term
  for (std::size_t mask = 1; mask < (std::size_t(1) << k); ++mask) {
    ComplexMatrix tg = ComplexMatrix::identity(tuple.dim);
    int bits = 0;
    for (std::size_t b = 0; b < k; ++b) {
      if (mask & (std::size_t(1) << b)) {
        tg = tg * tuple.ops[subset[b]];
        ++bits;
      }
    }
    ComplexMatrix term = tg * tg.adjoint();
    if (bits % 2 == 1)
      acc -= term;
    else
      acc += term;
  }
  return acc;
}

Purity is_pure(const ComplexMatrix& t, double tol) {
  require(t.is_square(), ErrorCode::shape_mismatch, "is_pure needs square");
  Purity out;
  out.spectral_radius = linalg::spectral_radius(t);
  out.indeterminate = out.spectral_radius >= 1.0 - tol &&
                      out.spectral_radius <= 1.0 + tol;
  out.pure = out.spectral_radius < 1.0 - tol;
  return out;
}

ClassReport class_membership(const ContractionTuple& tuple, double tol,
                             const Tolerances& tols) {
  ClassReport report;
  report.tolerance_used = tol;
  bool resid_ok = true;
  for (std::size_t i = 0; i < tuple.n(); ++i)
    for (std::size_t j = i + 1; j < tuple.n(); ++j) {
      const double r = linalg::op_norm(szego_inverse(tuple, {i, j}));
      report.pairwise_szego_residuals.push_back({i, j, r});
      resid_ok = resid_ok && r <= tol;
    }
  const Purity purity = is_pure(tuple.product(), tols.purity_tol);
  report.product_spectral_radius = purity.spectral_radius;
  report.is_member = resid_ok && purity.pure;
  return report;
}

double op_norm(const ComplexMatrix& m) { return linalg::op_norm(m); }

}  // namespace dilatrix
