#include "dilatrix/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dilatrix/linalg.hpp"

namespace dilatrix {

namespace {

std::string idx1(const char* name, std::size_t i) {
  return std::string(name) + "[" + std::to_string(i) + "]";
}
std::string idx2(const char* name, std::size_t i, std::size_t j) {
  return std::string(name) + "[" + std::to_string(i) + "][" +
         std::to_string(j) + "]";
}

void check_shapes(const BclTriple& t) {
  require(t.n() >= 1 && t.projections.size() == t.n(),
          ErrorCode::shape_mismatch, "BCL triple arity mismatch");
  for (std::size_t i = 0; i < t.n(); ++i) {
    require(t.unitaries[i].rows() == t.dim_e &&
                t.unitaries[i].cols() == t.dim_e &&
                t.projections[i].rows() == t.dim_e &&
                t.projections[i].cols() == t.dim_e,
            ErrorCode::shape_mismatch, "BCL triple block size mismatch");
  }
}

}  // namespace

Certificate validate_bcl(const BclTriple& triple, double tol) {
  check_shapes(triple);
  const std::size_t n = triple.n();
  const ComplexMatrix id = ComplexMatrix::identity(triple.dim_e);
  Certificate cert;

  for (std::size_t i = 0; i < n; ++i) {
    const auto& u = triple.unitaries[i];
    const auto& p = triple.projections[i];
    cert.add(idx1("unitary", i), linalg::op_norm(u.adjoint() * u - id), tol);
    const double proj_res = std::max(linalg::op_norm(p * p - p),
                                     linalg::op_norm(p - p.adjoint()));
    cert.add(idx1("projection", i), proj_res, tol);
  }

  // (1) commuting unitaries
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      cert.add(idx2("cond1", i, j),
               linalg::op_norm(triple.unitaries[i] * triple.unitaries[j] -
                               triple.unitaries[j] * triple.unitaries[i]),
               tol);

  // (2) U_1...U_n = I
  ComplexMatrix uprod = triple.unitaries[0];
  for (std::size_t i = 1; i < n; ++i) uprod = uprod * triple.unitaries[i];
  cert.add("cond2", linalg::op_norm(uprod - id), tol);

  // (3) P_i + U_i* P_j U_i = P_j + U_j* P_i U_j <= I  (i != j)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const ComplexMatrix qij =
          triple.projections[i] + triple.unitaries[i].adjoint() *
                                      triple.projections[j] *
                                      triple.unitaries[i];
      const ComplexMatrix qji =
          triple.projections[j] + triple.unitaries[j].adjoint() *
                                      triple.projections[i] *
                                      triple.unitaries[j];
      cert.add(idx2("cond3_eq", i, j), linalg::op_norm(qij - qji), tol);
      const auto eig = linalg::herm_eig(qij);
      const double top = eig.values.empty() ? 0.0 : eig.values.back();
      cert.add(idx2("cond3_bound", i, j), std::max(0.0, top - 1.0), tol);
    }

  // (4) P_1 + U_1* P_2 U_1 + ... = I
  {
    ComplexMatrix sum = triple.projections[0];
    ComplexMatrix left = triple.unitaries[0];  // U_1...U_k accumulated
    for (std::size_t k = 1; k < n; ++k) {
      sum += left.adjoint() * triple.projections[k] * left;
      if (k + 1 < n) left = left * triple.unitaries[k];
    }
    cert.add("cond4", linalg::op_norm(sum - id), tol);
  }

  // Mutual orthogonality P_i (U_i* P_j U_i) = 0, implied by (3).
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      cert.add(idx2("mutual_orth", i, j),
               linalg::op_norm(triple.projections[i] *
                               (triple.unitaries[i].adjoint() *
                                triple.projections[j] * triple.unitaries[i])),
               tol);
    }

  // The class criterion, reported separately from the BCL structure.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cert.add(idx2("class_commutation", i, j),
               linalg::op_norm(triple.unitaries[i] * triple.projections[j] -
                               triple.projections[j] * triple.unitaries[i]),
               tol);

  return cert;
}

bool bcl_passed(const Certificate& cert) {
  for (const auto& e : cert.entries()) {
    if (e.name.rfind("class_commutation", 0) == 0) continue;
    if (!e.pass) return false;
  }
  return true;
}

bool bcl_in_class(const Certificate& cert) {
  for (const auto& e : cert.entries())
    if (e.name.rfind("class_commutation", 0) == 0 && !e.pass) return false;
  return bcl_passed(cert);
}

ComplexMatrix phi_eval(const BclTriple& triple, std::size_t i, cplx z) {
  check_shapes(triple);
  require(i < triple.n(), ErrorCode::invalid_argument, "phi_eval index");
  const ComplexMatrix id = ComplexMatrix::identity(triple.dim_e);
  const auto& p = triple.projections[i];
  return triple.unitaries[i] * (id - p + z * p);
}

ComplexMatrix phi_coeff0(const BclTriple& triple, std::size_t i) {
  const ComplexMatrix id = ComplexMatrix::identity(triple.dim_e);
  return triple.unitaries[i] * (id - triple.projections[i]);
}

ComplexMatrix phi_coeff1(const BclTriple& triple, std::size_t i) {
  return triple.unitaries[i] * triple.projections[i];
}

TruncatedHardyOp mult_op_truncated(const ComplexMatrix& phi0,
                                   const ComplexMatrix& phi1, std::size_t n) {
  require(phi0.is_square() && phi1.is_square() && phi0.rows() == phi1.rows(),
          ErrorCode::shape_mismatch, "mult_op_truncated symbol mismatch");
  const std::size_t d = phi0.rows();
  TruncatedHardyOp op;
  op.dim_e = d;
  op.degree = n;
  op.mat = ComplexMatrix((n + 1) * d, (n + 1) * d);
  for (std::size_t k = 0; k <= n; ++k) {
    op.mat.set_block(k * d, k * d, phi0);
    if (k + 1 <= n) op.mat.set_block((k + 1) * d, k * d, phi1);
  }
  return op;
}

ComplexMatrix poly_symbol_section(const std::vector<ComplexMatrix>& coeffs,
                                  std::size_t degree) {
  require(!coeffs.empty(), ErrorCode::invalid_argument, "empty symbol");
  const std::size_t d = coeffs[0].rows();
  ComplexMatrix m((degree + 1) * d, (degree + 1) * d);
  for (std::size_t k = 0; k <= degree; ++k)
    for (std::size_t l = 0; l <= k; ++l) {
      const std::size_t c = k - l;
      if (c < coeffs.size()) m.set_block(k * d, l * d, coeffs[c]);
    }
  return m;
}

ComplexMatrix mult_op_apply_stacked(const ComplexMatrix& phi0,
                                    const ComplexMatrix& phi1,
                                    const ComplexMatrix& stacked) {
  const std::size_t d = phi0.rows();
  require(stacked.rows() % d == 0, ErrorCode::shape_mismatch,
          "stacked rows not a multiple of dimE");
  const std::size_t blocks = stacked.rows() / d;
  ComplexMatrix out(stacked.rows(), stacked.cols());
  for (std::size_t k = 0; k < blocks; ++k) {
    ComplexMatrix b = phi0 * stacked.block(k * d, 0, d, stacked.cols());
    if (k > 0)
      b += phi1 * stacked.block((k - 1) * d, 0, d, stacked.cols());
    out.set_block(k * d, 0, b);
  }
  return out;
}

ComplexMatrix mult_op_adjoint_apply_stacked(const ComplexMatrix& phi0,
                                            const ComplexMatrix& phi1,
                                            const ComplexMatrix& stacked) {
  const std::size_t d = phi0.rows();
  require(stacked.rows() % d == 0, ErrorCode::shape_mismatch,
          "stacked rows not a multiple of dimE");
  const std::size_t blocks = stacked.rows() / d;
  const ComplexMatrix p0h = phi0.adjoint();
  const ComplexMatrix p1h = phi1.adjoint();
  ComplexMatrix out(stacked.rows(), stacked.cols());
  for (std::size_t k = 0; k < blocks; ++k) {
    ComplexMatrix b = p0h * stacked.block(k * d, 0, d, stacked.cols());
    if (k + 1 < blocks)
      b += p1h * stacked.block((k + 1) * d, 0, d, stacked.cols());
    out.set_block(k * d, 0, b);
  }
  return out;
}

ComplexMatrix poly_symbol_adjoint_apply_stacked(
    const std::vector<ComplexMatrix>& coeffs, const ComplexMatrix& stacked,
    std::size_t dim_e) {
  require(stacked.rows() % dim_e == 0, ErrorCode::shape_mismatch,
          "stacked rows not a multiple of dimE");
  const std::size_t blocks = stacked.rows() / dim_e;
  std::vector<ComplexMatrix> adj;
  adj.reserve(coeffs.size());
  for (const auto& c : coeffs) adj.push_back(c.adjoint());
  ComplexMatrix out(stacked.rows(), stacked.cols());
  for (std::size_t k = 0; k < blocks; ++k) {
    ComplexMatrix b(dim_e, stacked.cols());
    for (std::size_t m = 0; m < adj.size() && k + m < blocks; ++m)
      multiply_acc(adj[m], stacked.block((k + m) * dim_e, 0, dim_e,
                                         stacked.cols()),
                   b);
    out.set_block(k * dim_e, 0, b);
  }
  return out;
}

ComplexMatrix poly_symbol_eval(const std::vector<ComplexMatrix>& coeffs,
                               cplx z) {
  require(!coeffs.empty(), ErrorCode::invalid_argument, "empty symbol");
  ComplexMatrix acc = coeffs.back();
  for (std::size_t k = coeffs.size(); k-- > 1;) {
    acc *= z;
    acc += coeffs[k - 1];
  }
  return acc;
}

ComplexMatrix drop_edge(const ComplexMatrix& m, std::size_t block) {
  require(m.is_square() && m.rows() >= block, ErrorCode::shape_mismatch,
          "drop_edge shape");
  ComplexMatrix out = m;
  const std::size_t start = m.rows() - block;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = start; j < m.cols(); ++j) out(i, j) = 0.0;
  for (std::size_t i = start; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = 0.0;
  return out;
}

std::size_t adaptive_degree(const ComplexMatrix& product, double tail_tol,
                            std::size_t cap, double* tail) {
  require(product.is_square(), ErrorCode::shape_mismatch,
          "adaptive_degree needs square");
  ComplexMatrix power = product;
  double nrm = linalg::op_norm(power);
  std::size_t n = 1;
  while (nrm > tail_tol && n < cap) {
    power = power * product;
    ++n;
    nrm = linalg::op_norm(power);
    // Contractions decay monotonically in norm only up to roundoff; bail out
    // early when the norm has stagnated at ~1 with no hope of reaching tol.
    if (n >= 64 && nrm > 0.9) break;
  }
  if (tail) *tail = nrm;
  require(nrm <= tail_tol, ErrorCode::truncation_insufficient,
          "adaptive_degree: ||P^" + std::to_string(n) +
              "|| = " + std::to_string(nrm) + " > " + std::to_string(tail_tol));
  return n;
}

BclBlockForm bcl_block_form(const BclTriple& triple, double tol) {
  Certificate validation = validate_bcl(triple, tol);
  require(bcl_passed(validation), ErrorCode::invalid_argument,
          "bcl_block_form: triple fails BCL validation at " +
              validation.first_failed());
  require(bcl_in_class(validation), ErrorCode::not_in_class,
          "bcl_block_form: U_i P_j = P_j U_i fails");

  const std::size_t n = triple.n();
  BclBlockForm out;
  out.certificate = validation;

  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    // ran P_i from the Hermitian eigendecomposition: eigenvalues near 1.
    auto eig = linalg::herm_eig(triple.projections[i]);
    std::size_t rank = 0;
    for (double v : eig.values)
      if (v > 0.5) ++rank;
    ComplexMatrix basis(triple.dim_e, rank);
    std::size_t c = 0;
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
      if (eig.values[k] <= 0.5) continue;
      for (std::size_t r = 0; r < triple.dim_e; ++r)
        basis(r, c) = eig.vectors(r, k);
      ++c;
    }
    out.bases.push_back(basis);
    total += rank;
  }
  out.certificate.add("summand_dimensions",
                      std::abs(static_cast<double>(total) -
                               static_cast<double>(triple.dim_e)),
                      0.5);

  out.restrictions.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.restrictions[i].resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const ComplexMatrix& b = out.bases[i];
      ComplexMatrix rest = b.adjoint() * triple.unitaries[j] * b;
      out.restrictions[i][j] = rest;
      // E_i must be U_j-reducing: the compression is unitary.
      if (b.cols() > 0) {
        const ComplexMatrix idr = ComplexMatrix::identity(b.cols());
        out.certificate.add(idx2("restriction_unitary", i, j),
                            linalg::op_norm(rest.adjoint() * rest - idr), tol);
      }
    }
  }

  // Double commutation on a small truncated section, edge excluded.
  const std::size_t nsec = 4;
  std::vector<ComplexMatrix> sections;
  for (std::size_t i = 0; i < n; ++i)
    sections.push_back(
        mult_op_truncated(phi_coeff0(triple, i), phi_coeff1(triple, i), nsec)
            .mat);
  double dc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const ComplexMatrix comm = sections[i].adjoint() * sections[j] -
                                 sections[j] * sections[i].adjoint();
      dc = std::max(dc,
                    linalg::op_norm(drop_edge(comm, triple.dim_e)));
    }
  out.certificate.add("double_commutation", dc, 1e-10);
  return out;
}

}  // namespace dilatrix
