#include "dilatrix/gen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "dilatrix/linalg.hpp"

namespace dilatrix {

double Rng::uniform() {
  return static_cast<double>(state_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(th);
  have_spare_ = true;
  return r * std::cos(th);
}

cplx Rng::gaussian_cplx() {
  const double re = gaussian();
  const double im = gaussian();
  return cplx(re, im);
}

cplx Rng::unit_cplx() {
  const double th = 2.0 * std::numbers::pi * uniform();
  return cplx(std::cos(th), std::sin(th));
}

ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.gaussian_cplx();
  return m;
}

ComplexMatrix random_unitary(Rng& rng, std::size_t n) {
  if (n == 0) return ComplexMatrix();
  // Haar-like: orthonormalize a Gaussian matrix, fixing column phases for
  // determinism of the representative.
  const ComplexMatrix g = random_matrix(rng, n, n);
  ComplexMatrix q = linalg::range_basis(g, 1e-12);
  if (q.cols() < n) {
    // Astronomically unlikely rank drop: re-draw.
    return random_unitary(rng, n);
  }
  for (std::size_t c = 0; c < n; ++c) {
    // Rotate so the largest entry of each column is positive real.
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      if (std::abs(q(r, c)) > best) {
        best = std::abs(q(r, c));
        arg = r;
      }
    const cplx phase = q(arg, c) / std::abs(q(arg, c));
    for (std::size_t r = 0; r < n; ++r) q(r, c) /= phase;
  }
  return q;
}

ContractionTuple gen_b20_pair(const GenSpec& spec) {
  require(spec.n >= 2, ErrorCode::invalid_argument, "gen: n must be >= 2");
  const double hi = std::min(spec.norm_hi, 1.0 - kStrictContractionMargin);
  const double lo = std::min(spec.norm_lo, hi);

  std::vector<std::size_t> dims = spec.dims;
  if (spec.kind == GenKind::scalar || dims.empty())
    dims.assign(spec.n, 1);
  require(dims.size() == spec.n, ErrorCode::invalid_argument,
          "gen: need one block dimension per tuple slot");

  Rng rng(spec.seed);
  std::vector<std::vector<ComplexMatrix>> blocks(spec.n);
  for (std::size_t b = 0; b < spec.n; ++b) {
    const std::size_t d = dims[b];
    if (d == 0) {
      for (std::size_t i = 0; i < spec.n; ++i)
        blocks[i].push_back(ComplexMatrix());
      continue;
    }
    const ComplexMatrix e = random_unitary(rng, d);
    // Block b carries its strict contraction in slot (b+1) mod n, so the
    // two-block case is exactly (U_1 + T_2, T_1 + U_2).
    const std::size_t strict_slot = (b + 1) % spec.n;
    for (std::size_t i = 0; i < spec.n; ++i) {
      std::vector<cplx> diag(d);
      for (std::size_t k = 0; k < d; ++k) {
        if (i == strict_slot)
          diag[k] = rng.uniform(lo, hi) * rng.unit_cplx();
        else
          diag[k] = rng.unit_cplx();
      }
      blocks[i].push_back(e * ComplexMatrix::diagonal(diag) * e.adjoint());
    }
  }

  ContractionTuple tuple;
  std::size_t dim = 0;
  for (std::size_t b = 0; b < spec.n; ++b) dim += dims[b];
  require(dim > 0, ErrorCode::invalid_argument, "gen: zero total dimension");
  tuple.dim = dim;
  for (std::size_t i = 0; i < spec.n; ++i)
    tuple.ops.push_back(direct_sum(blocks[i]));
  return tuple;
}

BclTriple gen_bcl_triple(const GenSpec& spec) {
  require(spec.n >= 1, ErrorCode::invalid_argument, "gen_bcl_triple: n");
  std::vector<std::size_t> parts = spec.dims;
  if (parts.empty()) parts.assign(spec.n, 1);
  require(parts.size() == spec.n, ErrorCode::invalid_argument,
          "gen_bcl_triple: need one summand dimension per slot");
  std::size_t dim_e = 0;
  for (std::size_t p : parts) dim_e += p;
  require(dim_e > 0, ErrorCode::invalid_argument, "gen_bcl_triple: empty E");

  Rng rng(spec.seed);
  const ComplexMatrix frame = random_unitary(rng, dim_e);

  // Per summand b: a common eigenbasis and unimodular diagonals with product
  // one across i, so U_1...U_n = I blockwise.
  std::vector<std::vector<ComplexMatrix>> ublocks(spec.n);
  for (std::size_t b = 0; b < spec.n; ++b) {
    const std::size_t d = parts[b];
    if (d == 0) {
      for (std::size_t i = 0; i < spec.n; ++i)
        ublocks[i].push_back(ComplexMatrix());
      continue;
    }
    const ComplexMatrix e = random_unitary(rng, d);
    std::vector<std::vector<cplx>> diags(spec.n, std::vector<cplx>(d));
    for (std::size_t k = 0; k < d; ++k) {
      cplx prod(1.0, 0.0);
      for (std::size_t i = 0; i + 1 < spec.n; ++i) {
        diags[i][k] = rng.unit_cplx();
        prod *= diags[i][k];
      }
      diags[spec.n - 1][k] = cplx(1.0, 0.0) / prod;
    }
    for (std::size_t i = 0; i < spec.n; ++i)
      ublocks[i].push_back(e * ComplexMatrix::diagonal(diags[i]) *
                           e.adjoint());
  }

  BclTriple triple;
  triple.dim_e = dim_e;
  std::vector<std::size_t> offsets(spec.n);
  {
    std::size_t at = 0;
    for (std::size_t b = 0; b < spec.n; ++b) {
      offsets[b] = at;
      at += parts[b];
    }
  }
  for (std::size_t i = 0; i < spec.n; ++i) {
    triple.unitaries.push_back(frame * direct_sum(ublocks[i]) *
                               frame.adjoint());
    ComplexMatrix p(dim_e, dim_e);
    for (std::size_t k = 0; k < parts[i]; ++k)
      p(offsets[i] + k, offsets[i] + k) = 1.0;
    triple.projections.push_back(frame * p * frame.adjoint());
  }
  return triple;
}

CompressionResult gen_bn0_compression(const BclTriple& triple,
                                      const GenSpec& spec) {
  Certificate validation = validate_bcl(triple);
  require(bcl_passed(validation) && bcl_in_class(validation),
          ErrorCode::not_in_class,
          "gen_bn0_compression: triple must be a validated class triple");

  const std::size_t n = triple.n();
  const std::size_t d = triple.dim_e;
  const std::size_t nsec = std::max<std::size_t>(spec.truncation, 1);
  const std::size_t ambient = (nsec + 1) * d;

  std::vector<ComplexMatrix> sections;
  for (std::size_t i = 0; i < n; ++i)
    sections.push_back(
        mult_op_truncated(phi_coeff0(triple, i), phi_coeff1(triple, i), nsec)
            .mat);

  Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
  ComplexMatrix seeds =
      random_matrix(rng, ambient, std::max<std::size_t>(spec.seed_vectors, 1));

  // Closure of the seeds under every adjoint section; adjoints do not raise
  // degree, so this span is genuinely co-invariant for the full operators.
  ComplexMatrix basis = linalg::range_basis(seeds, 1e-10);
  for (std::size_t round = 0; round <= ambient; ++round) {
    std::vector<ComplexMatrix> parts{basis};
    for (std::size_t i = 0; i < n; ++i)
      parts.push_back(sections[i].adjoint() * basis);
    ComplexMatrix all(ambient, 0);
    std::size_t cols = 0;
    for (const auto& p : parts) cols += p.cols();
    all = ComplexMatrix(ambient, cols);
    std::size_t at = 0;
    for (const auto& p : parts) {
      all.set_block(0, at, p);
      at += p.cols();
    }
    ComplexMatrix next = linalg::range_basis(all, 1e-10);
    if (next.cols() == basis.cols()) break;
    basis = next;
  }
  require(basis.cols() > 0, ErrorCode::degenerate_subspace,
          "gen_bn0_compression: subspace collapsed");

  CompressionResult out;
  out.triple = triple;
  out.subspace_dim = basis.cols();
  out.tuple.dim = basis.cols();
  for (std::size_t i = 0; i < n; ++i)
    out.tuple.ops.push_back(basis.adjoint() * sections[i] * basis);
  return out;
}

ComplexMatrix gen_commutant(const ContractionTuple& tuple,
                            const GenSpec& spec) {
  Rng rng(spec.seed ^ 0xc2b2ae3d27d4eb4full);
  ComplexMatrix p(tuple.dim, tuple.dim);
  // Random polynomial in the tuple of total degree <= 3.
  std::vector<ComplexMatrix> powers{ComplexMatrix::identity(tuple.dim)};
  const std::size_t n = tuple.n();
  std::vector<std::vector<unsigned>> exponents;
  std::vector<unsigned> alpha(n, 0);
  // Enumerate all multi-indices of total degree <= 3.
  std::function<void(std::size_t, unsigned)> walk = [&](std::size_t i,
                                                        unsigned left) {
    if (i == n) {
      exponents.push_back(alpha);
      return;
    }
    for (unsigned a = 0; a <= left; ++a) {
      alpha[i] = a;
      walk(i + 1, left - a);
      alpha[i] = 0;
    }
  };
  walk(0, 3);
  for (const auto& ex : exponents) {
    ComplexMatrix term = ComplexMatrix::identity(tuple.dim);
    for (std::size_t i = 0; i < n; ++i)
      for (unsigned a = 0; a < ex[i]; ++a) term = term * tuple.ops[i];
    term *= rng.gaussian_cplx();
    p += term;
  }
  const double nrm = linalg::op_norm(p);
  const double scale =
      1.0 / std::max(1.0, nrm + kStrictContractionMargin);
  p *= cplx(scale, 0.0);
  return p;
}

ContractionTuple gen_member(const GenSpec& spec) {
  switch (spec.kind) {
    case GenKind::direct_sum:
    case GenKind::scalar:
      return gen_b20_pair(spec);
    case GenKind::bcl_compression: {
      GenSpec tspec = spec;
      tspec.seed = spec.seed * 0x100000001b3ull + 17;
      return gen_bn0_compression(gen_bcl_triple(tspec), spec).tuple;
    }
  }
  throw Error(ErrorCode::invalid_argument, "gen_member: unknown kind");
}

}  // namespace dilatrix
