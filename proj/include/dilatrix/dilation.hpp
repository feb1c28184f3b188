#pragma once

#include <vector>

#include "dilatrix/hardy.hpp"
#include "dilatrix/opcore.hpp"
#include "dilatrix/types.hpp"

namespace dilatrix {

/// The defect-space unitaries W_j^(i) for one fixed j, in the orthonormal
/// basis of D_{T_j}: W_j^(i) D_{T_j} h = D_{T_j} T_i* h for i != j, and
/// W_j^(j) is the reversed product of the adjoints of the others.
struct WijSet {
  std::size_t j = 0;
  std::size_t rank = 0;
  std::vector<ComplexMatrix> w;  // n matrices, rank x rank
  Certificate certificate;
};

WijSet build_wij(const ContractionTuple& tuple, std::size_t j,
                 const Defect& dj, double tol = 1e-8);

/// BCL triple of the dilating tuple: E = direct sum of the defect spaces,
/// U_i* = direct sum over j of W_j^(i), P_i the coordinate projection onto
/// the i-th summand. Zero-rank summands are dropped from E; `offsets` keeps
/// the block layout aligned with the original indices.
struct BclFromTuple {
  BclTriple triple;
  std::vector<Defect> defects;       // per original index j
  std::vector<std::size_t> offsets;  // block start of summand j in E
  std::vector<WijSet> wij;
  Certificate certificate;
};

BclFromTuple build_bcl_from_tuple(const ContractionTuple& tuple,
                                  double tol = 1e-8);

/// Isometric dilation data: the truncated dilation map Pi (degree-stacked,
/// (N+1)*dimE x dim), and V, the isometry D_{P_T} -> E of Eq-style column map
/// h |-> (D_{T_1} h, D_{T_2} T_1* h, ...), expressed in the orthonormal
/// defect basis of D_{P_T} (stored in product_defect).
struct DilationResult {
  BclTriple triple;
  ComplexMatrix v;   // dimE x rank(D_{P_T})
  ComplexMatrix pi;  // (N+1)*dimE x dim
  std::size_t degree = 0;
  double tail = 0.0;  // ||P_T^N||
  Certificate certificate;
  std::vector<Defect> defects;
  std::vector<std::size_t> offsets;
  Defect product_defect;
};

DilationResult dilation_isometry(const ContractionTuple& tuple,
                                 const BclFromTuple& bcl, std::size_t degree);

/// build_bcl_from_tuple + dilation_isometry; degree 0 means adaptive.
DilationResult dilate(const ContractionTuple& tuple, std::size_t degree = 0,
                      double tol = 1e-8);

/// Isometric dilation of the (n+1)-tuple (T_1,...,T_n,X): the commutant X is
/// lifted to M_Theta over the BCL dilation, M_Theta is dilated to an isometry
/// Y by one defect-embedding step on (truncated Hardy) + l^2(D_{M_Theta})
/// slots, and each M_{Phi_i} extends to the slots by the induced defect
/// unitaries y_i : D_{M_Theta} x -> D_{M_Theta} M_{Phi_i} x.
struct NPlusOneDilation {
  DilationResult dilation;
  std::vector<ComplexMatrix> theta;          // lift symbol coefficients
  ComplexMatrix e_factor;                    // E, E^H E = I - M^H M
  std::vector<ComplexMatrix> slot_unitaries; // y_i per i
  std::size_t slots = 0;
  Certificate certificate;
};

NPlusOneDilation dilate_n_plus_one(const ContractionTuple& tuple,
                                   const ComplexMatrix& x,
                                   std::size_t degree = 0, double tol = 1e-6);

}  // namespace dilatrix
