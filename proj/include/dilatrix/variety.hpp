#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "dilatrix/hardy.hpp"
#include "dilatrix/opcore.hpp"
#include "dilatrix/types.hpp"

namespace dilatrix {

/// Joint eigenvalues of commuting matrices, with multiplicity (one point per
/// dimension) and a certified residual per point: the smallest singular value
/// of the stacked pencils (A_i - lambda_i I).
struct JointSpectrumResult {
  std::vector<std::vector<cplx>> points;
  std::vector<double> residuals;
};

JointSpectrumResult joint_spectrum(const std::vector<ComplexMatrix>& mats,
                                   double tol = 1e-8,
                                   std::uint64_t seed = 0xD11A);

/// Points of the one-dimensional variety on the n-torus: for each of the M
/// grid points z on the unit circle, the joint spectrum of the commuting
/// unitaries (Phi_1(z),...,Phi_n(z)). Every point has unimodular coordinates
/// whose product is the grid z.
std::vector<std::vector<cplx>> variety_points(const BclTriple& triple,
                                              std::size_t grid);

/// Polynomial in n variables as a coefficient table over multi-indices.
struct Polynomial {
  std::size_t nvars = 0;
  std::map<std::vector<unsigned>, cplx> coeffs;

  unsigned total_degree() const;
  cplx eval(const std::vector<cplx>& z) const;
};

/// p(T_1,...,T_n) = sum_alpha c_alpha T^alpha (monomial order immaterial for
/// commuting tuples).
ComplexMatrix poly_eval_matrix(const Polynomial& p,
                               const ContractionTuple& tuple);

struct VnCertificate {
  double lhs = 0.0;        // ||p(T)||
  double rhs = 0.0;        // sup |p| over the sampled variety
  double rhs_torus = 0.0;  // classical bound, sampled; for comparison
  std::size_t grid_size = 0;
  double margin = 0.0;  // rhs - lhs
  bool pass = false;
  double tolerance = 0.0;
};

/// Sharp von Neumann certificate: ||p(T)|| against the sup of |p| over the
/// variety of the dilating BCL tuple, sampled on an M-point circle grid.
VnCertificate vn_check(const ContractionTuple& tuple, const Polynomial& p,
                       std::size_t grid = 257, double tol = 1e-6);

}  // namespace dilatrix
