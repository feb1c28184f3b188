#pragma once

#include <cstdint>
#include <vector>

#include "dilatrix/types.hpp"

namespace dilatrix {

/// Tolerance bundle for the class tests. All operators are contractions, so
/// absolute thresholds are scale-correct; comm_tol is relative to
/// max(1, ||T_i|| ||T_j||).
struct Tolerances {
  double comm_tol = 1e-10;
  double norm_tol = 1e-8;
  double psd_tol = 1e-10;
  double rank_tol = 1e-10;
  double purity_tol = 1e-8;
};

/// n commuting contractions on a common finite-dimensional space.
struct ContractionTuple {
  std::size_t dim = 0;
  std::vector<ComplexMatrix> ops;

  std::size_t n() const { return ops.size(); }
  ComplexMatrix product() const;

  /// Pairwise commutation + contractivity certificate; throws on shape
  /// violations, reports residuals otherwise.
  Certificate validate(const Tolerances& tol = {}) const;
};

struct Defect {
  ComplexMatrix sqrt;   // D_T = (I - T T*)^{1/2}, same size as T
  ComplexMatrix basis;  // orthonormal columns spanning ran D_T
  std::size_t rank = 0;
  double min_eigenvalue = 0.0;  // of I - T T*, before clamping
};

/// Defect operator and defect-space basis. Eigenvalues of I-TT* below
/// -psd_tol are an error (NotAContraction); in [-psd_tol, 0] they clamp to 0;
/// the numerical rank uses rank_tol.
Defect defect(const ComplexMatrix& t, const Tolerances& tol = {});

/// Szego-type operator S^{-1}_{|F|}(T_{i_1},...,T_{i_k}): alternating-sign
/// sum of T_G T_G* over all G subseteq F, with T_{}=I. Indices are 0-based.
ComplexMatrix szego_inverse(const ContractionTuple& tuple,
                            const std::vector<std::size_t>& subset);

struct Purity {
  bool pure = false;
  double spectral_radius = 0.0;
  /// Set when rho lies in [1-tol, 1+tol]; callers must treat as not pure.
  bool indeterminate = false;
};

/// Purity on finite-dimensional spaces: rho(T) < 1 - tol.
Purity is_pure(const ComplexMatrix& t, double tol = 1e-8);

struct ClassReport {
  struct PairResidual {
    std::size_t i, j;
    double value;
  };
  std::vector<PairResidual> pairwise_szego_residuals;
  double product_spectral_radius = 0.0;
  bool is_member = false;
  double tolerance_used = 0.0;
};

/// Membership test for the class: S^{-1}_2(T_i,T_j)=0 for all i<j and the
/// product contraction pure.
ClassReport class_membership(const ContractionTuple& tuple, double tol = 1e-8,
                             const Tolerances& tols = {});

double op_norm(const ComplexMatrix& m);

}  // namespace dilatrix
