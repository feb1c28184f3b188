#pragma once

#include <vector>

#include "dilatrix/types.hpp"

// Dense decompositions behind a small API. Everything here is standard
// numerical plumbing; the operator-theoretic constructions live elsewhere.
namespace dilatrix::linalg {

/// Eigendecomposition of the Hermitian part (A+A^H)/2, ascending eigenvalues,
/// orthonormal eigenvector columns.
struct HermEig {
  std::vector<double> values;
  ComplexMatrix vectors;
};
HermEig herm_eig(const ComplexMatrix& a);

/// Largest singular value; 0 for empty matrices.
double op_norm(const ComplexMatrix& a);

double smallest_singular_value(const ComplexMatrix& a);

std::vector<cplx> eigenvalues(const ComplexMatrix& a);

double spectral_radius(const ComplexMatrix& a);

/// A = Q T Q^H with Q unitary, T upper triangular.
struct Schur {
  ComplexMatrix q;
  ComplexMatrix t;
};
Schur schur(const ComplexMatrix& a);

/// Minimizer X of ||X*A - B||_F (least squares in the rows).
ComplexMatrix solve_right(const ComplexMatrix& a, const ComplexMatrix& b);

/// Unitary polar factor (closest unitary in Frobenius norm).
ComplexMatrix closest_unitary(const ComplexMatrix& a);

/// Moore-Penrose pseudoinverse with singular values <= sv_tol (absolute)
/// treated as zero. Directions below the threshold carry data noise, not
/// signal; dropping them keeps least-squares slopes bounded.
ComplexMatrix pinv(const ComplexMatrix& a, double sv_tol);

/// Orthonormal basis of the column span, numerical rank from column-pivoted
/// QR at the given absolute threshold.
ComplexMatrix range_basis(const ComplexMatrix& a, double tol);

/// Hermitian PSD square root with the clamping policy shared by all defect
/// computations: eigenvalues below -psd_tol raise NotAContraction (message
/// prefixed by `who`), in [-psd_tol, 0] clamp to zero. min_eig reports the
/// smallest eigenvalue seen.
ComplexMatrix psd_sqrt(const ComplexMatrix& a, double psd_tol,
                       const char* who, double* min_eig = nullptr);

ComplexMatrix linsolve(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace dilatrix::linalg
