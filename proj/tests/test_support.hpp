#pragma once

#include <vector>

#include "dilatrix/gen.hpp"
#include "dilatrix/linalg.hpp"
#include "dilatrix/opcore.hpp"

namespace testsup {

using dilatrix::ComplexMatrix;
using dilatrix::ContractionTuple;
using dilatrix::cplx;

inline ComplexMatrix scalar(double re, double im = 0.0) {
  ComplexMatrix m(1, 1);
  m(0, 0) = cplx(re, im);
  return m;
}

inline ContractionTuple scalar_tuple(std::initializer_list<cplx> vals) {
  ContractionTuple t;
  t.dim = 1;
  for (cplx v : vals) {
    ComplexMatrix m(1, 1);
    m(0, 0) = v;
    t.ops.push_back(m);
  }
  return t;
}

/// Commuting contractive tuple with no class structure: scaled polynomials
/// in one random contraction.
inline ContractionTuple commuting_tuple(std::uint64_t seed, std::size_t n,
                                        std::size_t dim) {
  dilatrix::Rng rng(seed);
  ComplexMatrix base = dilatrix::random_matrix(rng, dim, dim);
  base *= cplx(1.0 / (dilatrix::linalg::op_norm(base) + 0.1), 0.0);
  ContractionTuple t;
  t.dim = dim;
  for (std::size_t i = 0; i < n; ++i) {
    ComplexMatrix p(dim, dim);
    ComplexMatrix power = ComplexMatrix::identity(dim);
    for (std::size_t k = 0; k <= 3; ++k) {
      ComplexMatrix term = power;
      term *= rng.gaussian_cplx();
      p += term;
      power = power * base;
    }
    p *= cplx(rng.uniform(0.3, 0.95) / dilatrix::linalg::op_norm(p), 0.0);
    t.ops.push_back(p);
  }
  return t;
}

/// Mixed pool of class members for the property tests: direct sums and
/// compressions across n in {2,3,4}, dim <= 8.
inline std::vector<ContractionTuple> member_pool(std::size_t count,
                                                 std::uint64_t seed) {
  std::vector<ContractionTuple> pool;
  dilatrix::Rng pick(seed);
  std::size_t made = 0;
  for (std::uint64_t k = 0; made < count; ++k) {
    dilatrix::GenSpec spec;
    spec.seed = seed * 1000003ull + k;
    const std::size_t shape = k % 6;
    switch (shape) {
      case 0:
        spec.kind = dilatrix::GenKind::direct_sum;
        spec.n = 2;
        spec.dims = {2, 2};
        break;
      case 1:
        spec.kind = dilatrix::GenKind::direct_sum;
        spec.n = 3;
        spec.dims = {2, 2, 2};
        break;
      case 2:
        spec.kind = dilatrix::GenKind::direct_sum;
        spec.n = 4;
        spec.dims = {2, 2, 2, 2};
        break;
      case 3:
        spec.kind = dilatrix::GenKind::bcl_compression;
        spec.n = 2;
        spec.dims = {2, 2};
        spec.truncation = 1;
        break;
      case 4:
        spec.kind = dilatrix::GenKind::bcl_compression;
        spec.n = 3;
        spec.dims = {1, 1, 1};
        spec.truncation = 1;
        break;
      default:
        spec.kind = dilatrix::GenKind::scalar;
        spec.n = 2;
        break;
    }
    pool.push_back(dilatrix::gen_member(spec));
    ++made;
  }
  return pool;
}

}  // namespace testsup
