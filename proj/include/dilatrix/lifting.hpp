#pragma once

#include <vector>

#include "dilatrix/dilation.hpp"
#include "dilatrix/opcore.hpp"
#include "dilatrix/types.hpp"

namespace dilatrix {

/// 2x2 block contraction W = [[A,B],[C,D]] on K + G with transfer function
/// tau_W(z) = A + zB(I-zD)^{-1}C.
struct TransferRealization {
  std::size_t dim_k = 0;
  std::size_t dim_g = 0;
  ComplexMatrix a, b, c, d;

  ComplexMatrix full() const;
  static TransferRealization from_full(const ComplexMatrix& w,
                                       std::size_t dim_k);
};

/// tau_W(z) = A + zB(I - zD)^{-1}C (resolvent form, exact linear solve).
ComplexMatrix transfer_eval(const TransferRealization& w, cplx z);

/// tau_{W*}(z) = A* + C* z (I - zD*)^{-1} B*.
ComplexMatrix transfer_adjoint_eval(const TransferRealization& w, cplx z);

/// Taylor coefficients of tau_{W*}: Theta_0 = A*, Theta_k = C* D*^{k-1} B*.
std::vector<ComplexMatrix> transfer_adjoint_coefficients(
    const TransferRealization& w, std::size_t count);

/// true iff ||X|| <= 1 + tol and X commutes with every T_i to tol.
bool commutant_check(const ContractionTuple& tuple, const ComplexMatrix& x,
                     double tol = 1e-8);

/// The positive operators G_j with I - XX* = G_1 + ... + G_n and
/// G_j = T_i G_j T_i* (i != j), computed as the limit of the cyclic
/// completely positive iteration over the deleted tuple.
struct DefectDecomposition {
  std::vector<ComplexMatrix> g;
  std::size_t iterations = 0;
  double residual = 0.0;  // last full-cycle Frobenius change
  Certificate certificate;
};

DefectDecomposition defect_decomposition(const ContractionTuple& tuple,
                                         const ComplexMatrix& x,
                                         double tol = 1e-8,
                                         std::size_t max_rounds = 0);

/// For a unitary realization W and an isometry U on K with
/// M_{tau_W} (I x U) = (I x U) M_{tau_W}: the contraction Y on G acting by
/// D^k C eta -> D^k C U eta on the pure part and 0 on the unitary part of D,
/// so that diag(U, Y) commutes with W.
struct IntertwinerResult {
  ComplexMatrix y;
  std::size_t pure_dim = 0;  // dim of span{D^k C}
  Certificate certificate;
};

IntertwinerResult intertwiner_y(const TransferRealization& w,
                                const ComplexMatrix& u, double tol = 1e-10);

/// Commutant lift: per summand j a contraction R on K_j + G with
/// Theta_j = tau_{R*}, assembled block-diagonally into the full symbol.
struct LiftResult {
  std::vector<TransferRealization> realizations;  // indexed by j; rank-0
                                                  // summands stay empty
  std::vector<std::vector<ComplexMatrix>> theta_blocks;  // per j
  std::vector<ComplexMatrix> theta;  // full E-valued coefficients 0..N
  std::size_t degree = 0;
  Certificate certificate;
};

LiftResult build_lift(const ContractionTuple& tuple, const ComplexMatrix& x,
                      const DilationResult& dilation,
                      const DefectDecomposition& dd, double tol = 1e-6);

/// Residuals of the lift: (a) ||Pi X* - M_Theta* Pi||, (b) commutation with
/// every M_{Phi_i} on the truncated space, (c) grid sup of ||Theta(z)|| - 1
/// clipped at zero. Entry names: lift_intertwine, commute_with_phi[i],
/// multiplier_norm.
Certificate verify_lift(const DilationResult& dilation, const ComplexMatrix& x,
                        const LiftResult& lift, double tol = 1e-6,
                        std::size_t grid = 257);

/// Verifies each Taylor coefficient of Theta is block diagonal with respect
/// to E = + E_i and returns the restricted symbols (per i, coefficients).
std::vector<std::vector<ComplexMatrix>> commutant_block_structure(
    const BclTriple& triple, const std::vector<ComplexMatrix>& theta,
    double tol = 1e-8);

}  // namespace dilatrix
