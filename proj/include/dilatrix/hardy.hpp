#pragma once

#include <vector>

#include "dilatrix/types.hpp"

namespace dilatrix {

/// BCL triple (dim E, U_1..U_n, P_1..P_n). The symbol of the i-th isometry is
/// Phi_i(z) = U_i (P_i^perp + z P_i).
struct BclTriple {
  std::size_t dim_e = 0;
  std::vector<ComplexMatrix> unitaries;
  std::vector<ComplexMatrix> projections;

  std::size_t n() const { return unitaries.size(); }
};

/// Residual certificate for the BCL structure: unitarity, projections,
/// conditions (1)-(4), the mutual-orthogonality identity P_i(U_i* P_j U_i)=0,
/// and - reported separately - the commutation U_i P_j = P_j U_i whose
/// vanishing is exactly class membership of the BCL tuple. bcl_passed /
/// in_class below split the two.
Certificate validate_bcl(const BclTriple& triple, double tol = 1e-10);

/// Conditions (1)-(4) + structure residuals only (class commutation excluded).
bool bcl_passed(const Certificate& cert);

/// The class criterion: every class_commutation entry within tolerance.
bool bcl_in_class(const Certificate& cert);

/// Phi_i(z); unitary whenever |z| = 1. i is 0-based.
ComplexMatrix phi_eval(const BclTriple& triple, std::size_t i, cplx z);

/// Constant and linear symbol coefficients: Phi_i = U_i P_i^perp + z U_i P_i.
ComplexMatrix phi_coeff0(const BclTriple& triple, std::size_t i);
ComplexMatrix phi_coeff1(const BclTriple& triple, std::size_t i);

/// Finite section of a multiplication operator acting on coefficient stacks
/// (a_0,...,a_N) of E-valued polynomials.
struct TruncatedHardyOp {
  std::size_t dim_e = 0;
  std::size_t degree = 0;
  ComplexMatrix mat;  // (N+1)*dimE square, block lower bidiagonal
};

TruncatedHardyOp mult_op_truncated(const ComplexMatrix& phi0,
                                   const ComplexMatrix& phi1, std::size_t n);

/// Dense section for a general polynomial symbol (block lower triangular
/// Toeplitz with the given coefficient blocks on the diagonals).
ComplexMatrix poly_symbol_section(const std::vector<ComplexMatrix>& coeffs,
                                  std::size_t degree);

/// Apply the section of M_Phi (affine symbol) to a stacked matrix whose rows
/// come in dimE-blocks per degree. Exact on polynomial coefficient stacks.
ComplexMatrix mult_op_apply_stacked(const ComplexMatrix& phi0,
                                    const ComplexMatrix& phi1,
                                    const ComplexMatrix& stacked);

/// Apply the adjoint section M_Phi^*; block k of the result reads blocks k and
/// k+1 of the input (the missing block N+1 is treated as 0, which matches the
/// full-space operator on stacks whose tail is negligible).
ComplexMatrix mult_op_adjoint_apply_stacked(const ComplexMatrix& phi0,
                                            const ComplexMatrix& phi1,
                                            const ComplexMatrix& stacked);

/// Same for a polynomial symbol Theta = sum_k Theta_k z^k.
ComplexMatrix poly_symbol_adjoint_apply_stacked(
    const std::vector<ComplexMatrix>& coeffs, const ComplexMatrix& stacked,
    std::size_t dim_e);

/// Evaluate sum_k coeffs[k] z^k (Horner).
ComplexMatrix poly_symbol_eval(const std::vector<ComplexMatrix>& coeffs,
                               cplx z);

/// Zero out the top-degree block row and column: the edge rule for
/// operator-identity checks on finite sections.
ComplexMatrix drop_edge(const ComplexMatrix& m, std::size_t block);

/// Smallest N with ||P^N|| <= tail_tol, capped; throws
/// TruncationInsufficient when the cap cannot reach the target. The achieved
/// tail is returned through `tail`.
std::size_t adaptive_degree(const ComplexMatrix& product, double tail_tol,
                            std::size_t cap, double* tail);

inline constexpr std::size_t kDefaultDegreeCap = 512;

/// Decomposition of a class BCL triple into its summands E_i = ran P_i with
/// the restricted unitaries U_j|_{E_i}.
struct BclBlockForm {
  std::vector<ComplexMatrix> bases;  // bases[i]: dimE x dim E_i
  std::vector<std::vector<ComplexMatrix>> restrictions;  // [i][j] = U_j|_{E_i}
  Certificate certificate;
};

BclBlockForm bcl_block_form(const BclTriple& triple, double tol = 1e-10);

}  // namespace dilatrix
