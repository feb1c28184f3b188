#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dilatrix/hardy.hpp"
#include "dilatrix/opcore.hpp"
#include "dilatrix/types.hpp"

namespace dilatrix {

/// Deterministic RNG: mt19937_64 plus in-house uniform/Gaussian layers so
/// identical seeds give bit-identical streams for a given build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  double uniform();                    // [0, 1)
  double uniform(double lo, double hi);
  double gaussian();                   // Box-Muller
  cplx gaussian_cplx();
  cplx unit_cplx();                    // uniform on the circle
  std::uint64_t bits() { return state_(); }

 private:
  std::mt19937_64 state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

ComplexMatrix random_unitary(Rng& rng, std::size_t n);
ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols);

enum class GenKind { direct_sum, bcl_compression, scalar };

struct GenSpec {
  std::uint64_t seed = 0;
  std::size_t n = 2;
  std::vector<std::size_t> dims;  // per-block (direct_sum) or ambient sizing
  GenKind kind = GenKind::direct_sum;
  // Norm targets for the strict-contraction slots; hi stays <= 1 - delta.
  double norm_lo = 0.35;
  double norm_hi = 0.95;
  // bcl_compression controls
  std::size_t truncation = 3;
  std::size_t seed_vectors = 1;
};

inline constexpr double kStrictContractionMargin = 0.05;

/// Direct-sum class members: block b carries commuting diagonal-model
/// operators in a common random eigenbasis, unimodular in every slot except
/// the b-th, which is a strict contraction. For n = 2 this is exactly the
/// two-block form of finite-dimensional class pairs.
ContractionTuple gen_b20_pair(const GenSpec& spec);

/// Random class BCL triple: orthogonal projection blocks in a rotated basis
/// and commuting block unitaries with product I.
BclTriple gen_bcl_triple(const GenSpec& spec);

struct CompressionResult {
  ContractionTuple tuple;
  BclTriple triple;  // provenance: the dilating triple used
  std::size_t subspace_dim = 0;
};

/// Compression of the BCL tuple to a joint co-invariant subspace of the
/// truncated Hardy space, grown from seeded vectors under the adjoints.
CompressionResult gen_bn0_compression(const BclTriple& triple,
                                      const GenSpec& spec);

/// Commutant as a scaled polynomial in the tuple: X = p(T)/max(1,||p(T)||+d).
ComplexMatrix gen_commutant(const ContractionTuple& tuple,
                            const GenSpec& spec);

/// Convenience: a member of the class per spec.kind (compressions generate
/// their own triple from the spec).
ContractionTuple gen_member(const GenSpec& spec);

}  // namespace dilatrix
