#include "dilatrix/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dilatrix/lifting.hpp"
#include "dilatrix/linalg.hpp"

namespace dilatrix {

namespace {

std::string idx1(const char* name, std::size_t i) {
  return std::string(name) + "[" + std::to_string(i) + "]";
}

}  // namespace

WijSet build_wij(const ContractionTuple& tuple, std::size_t j,
                 const Defect& dj, double tol) {
  require(j < tuple.n(), ErrorCode::invalid_argument, "build_wij index");
  const std::size_t n = tuple.n();
  const std::size_t r = dj.rank;

  WijSet out;
  out.j = j;
  out.rank = r;
  out.w.assign(n, ComplexMatrix(r, r));
  if (r == 0) {
    out.certificate.add_info("degenerate_defect", 1.0);
    return out;
  }

  // Coordinates of the defect range: rows of X span it, X = B^H D_{T_j}.
  const ComplexMatrix x = dj.basis.adjoint() * dj.sqrt;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == j) continue;
    const ComplexMatrix y = x * tuple.ops[i].adjoint();
    ComplexMatrix w = linalg::solve_right(x, y);
    const double fit = linalg::op_norm(w * x - y);
    const double unit = linalg::op_norm(
        w.adjoint() * w - ComplexMatrix::identity(r));
    out.certificate.add(idx1("fit", i), fit, tol);
    out.certificate.add(idx1("isometry", i), unit, tol);
    require(fit <= tol && unit <= tol, ErrorCode::not_in_class,
            "build_wij: W_" + std::to_string(j) + "^(" + std::to_string(i) +
                ") is not unitary; S_2^{-1} != 0 on the defect space");
    out.w[i] = linalg::closest_unitary(w);
  }

  // W_j^(j) = W^{(1)*} ... W^{(j-1)*} W^{(j+1)*} ... W^{(n)*}
  ComplexMatrix wjj = ComplexMatrix::identity(r);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == j) continue;
    wjj = wjj * out.w[i].adjoint();
  }
  out.w[j] = wjj;

  // Product identity W^(1)...W^(n) = I.
  ComplexMatrix prod = ComplexMatrix::identity(r);
  for (std::size_t i = 0; i < n; ++i) prod = prod * out.w[i];
  out.certificate.add("product_identity",
                      linalg::op_norm(prod - ComplexMatrix::identity(r)), tol);

  // Defining action of the j-th factor: W^(j) D P_T* = D T_j* on range coords.
  const ComplexMatrix pt = tuple.product();
  out.certificate.add(
      "wjj_action",
      linalg::op_norm(out.w[j] * (x * pt.adjoint()) -
                      x * tuple.ops[j].adjoint()),
      tol);

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k)
      out.certificate.add(
          "commutation[" + std::to_string(i) + "][" + std::to_string(k) + "]",
          linalg::op_norm(out.w[i] * out.w[k] - out.w[k] * out.w[i]), tol);
  return out;
}

BclFromTuple build_bcl_from_tuple(const ContractionTuple& tuple, double tol) {
  Certificate tuple_cert = tuple.validate();
  require(tuple_cert.passed(), ErrorCode::invalid_argument,
          "tuple validation failed at " + tuple_cert.first_failed());
  const ClassReport report = class_membership(tuple, tol);
  if (!report.is_member) {
    double worst = 0.0;
    for (const auto& p : report.pairwise_szego_residuals)
      worst = std::max(worst, p.value);
    throw Error(ErrorCode::not_in_class,
                "build_bcl_from_tuple: not a class member (max Szego residual " +
                    std::to_string(worst) + ", rho(P_T) " +
                    std::to_string(report.product_spectral_radius) + ")");
  }

  const std::size_t n = tuple.n();
  BclFromTuple out;
  out.defects.reserve(n);
  for (std::size_t j = 0; j < n; ++j) out.defects.push_back(defect(tuple.ops[j]));

  std::size_t dim_e = 0;
  out.offsets.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.offsets[j] = dim_e;
    dim_e += out.defects[j].rank;
  }
  require(dim_e > 0, ErrorCode::degenerate_subspace,
          "build_bcl_from_tuple: all defect spaces are zero");

  for (std::size_t j = 0; j < n; ++j) {
    out.wij.push_back(build_wij(tuple, j, out.defects[j], tol));
    out.certificate.merge(out.wij.back().certificate,
                          "w[" + std::to_string(j) + "]");
  }

  out.triple.dim_e = dim_e;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(n);
    for (std::size_t j = 0; j < n; ++j) blocks.push_back(out.wij[j].w[i]);
    // U_i* = direct sum of the W_j^(i)
    out.triple.unitaries.push_back(direct_sum(blocks).adjoint());

    ComplexMatrix p(dim_e, dim_e);
    for (std::size_t k = 0; k < out.defects[i].rank; ++k)
      p(out.offsets[i] + k, out.offsets[i] + k) = 1.0;
    out.triple.projections.push_back(p);
  }

  Certificate bcl_cert = validate_bcl(out.triple, std::max(tol, 1e-10));
  require(bcl_passed(bcl_cert), ErrorCode::numeric_failure,
          "constructed triple fails BCL validation at " +
              bcl_cert.first_failed());
  require(bcl_in_class(bcl_cert), ErrorCode::numeric_failure,
          "constructed triple fails the class criterion");
  out.certificate.merge(bcl_cert, "bcl");
  return out;
}

DilationResult dilation_isometry(const ContractionTuple& tuple,
                                 const BclFromTuple& bcl, std::size_t degree) {
  const std::size_t n = tuple.n();
  const std::size_t dim = tuple.dim;
  const std::size_t dim_e = bcl.triple.dim_e;
  const ComplexMatrix pt = tuple.product();

  DilationResult out;
  out.triple = bcl.triple;
  out.defects = bcl.defects;
  out.offsets = bcl.offsets;
  out.certificate = bcl.certificate;

  double tail = 0.0;
  if (degree == 0) {
    degree = adaptive_degree(pt, 1e-10, kDefaultDegreeCap, &tail);
  } else {
    ComplexMatrix power = ComplexMatrix::identity(dim);
    for (std::size_t k = 0; k < degree; ++k) power = power * pt;
    tail = linalg::op_norm(power);
    require(tail <= 1e-10, ErrorCode::truncation_insufficient,
            "dilation_isometry: ||P_T^" + std::to_string(degree) +
                "|| = " + std::to_string(tail));
  }
  out.degree = degree;
  out.tail = tail;

  // Column map h -> (D_{T_1} h, D_{T_2} T_1* h, ...) in defect coordinates.
  ComplexMatrix c(dim_e, dim);
  ComplexMatrix prefix = ComplexMatrix::identity(dim);
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0) prefix = prefix * tuple.ops[j - 1];
    if (bcl.defects[j].rank == 0) continue;
    const ComplexMatrix block =
        bcl.defects[j].basis.adjoint() * bcl.defects[j].sqrt * prefix.adjoint();
    c.set_block(bcl.offsets[j], 0, block);
  }

  // V expressed on the defect basis of D_{P_T}: V (G^H D_{P_T}) = C.
  out.product_defect = defect(pt);
  const ComplexMatrix xg =
      out.product_defect.basis.adjoint() * out.product_defect.sqrt;
  out.v = linalg::solve_right(xg, c);
  out.certificate.add("v_fit", linalg::op_norm(out.v * xg - c), 1e-8);
  if (out.product_defect.rank > 0)
    out.certificate.add(
        "v_isometry",
        linalg::op_norm(out.v.adjoint() * out.v -
                        ComplexMatrix::identity(out.product_defect.rank)),
        1e-8);

  // Pi block k = C (P_T^H)^k, stopping early once the column norm dies.
  out.pi = ComplexMatrix((degree + 1) * dim_e, dim);
  ComplexMatrix q = ComplexMatrix::identity(dim);
  for (std::size_t k = 0; k <= degree; ++k) {
    if (k > 0) q = q * pt.adjoint();
    const ComplexMatrix block = c * q;
    if (linalg::op_norm(block) <= 1e-14 && k > 0) break;
    out.pi.set_block(k * dim_e, 0, block);
  }

  out.certificate.add(
      "pi_isometry",
      linalg::op_norm(out.pi.adjoint() * out.pi -
                      ComplexMatrix::identity(dim)),
      tail * tail + 1e-10);

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexMatrix lhs = out.pi * tuple.ops[i].adjoint();
    const ComplexMatrix rhs = mult_op_adjoint_apply_stacked(
        phi_coeff0(bcl.triple, i), phi_coeff1(bcl.triple, i), out.pi);
    const double r = linalg::op_norm(lhs - rhs);
    out.certificate.add(idx1("intertwining", i), r, 1e-6);
    worst = std::max(worst, r);
  }
  out.certificate.add_info("max_intertwining", worst);
  out.certificate.add_info("tail", tail);
  return out;
}

DilationResult dilate(const ContractionTuple& tuple, std::size_t degree,
                      double tol) {
  return dilation_isometry(tuple, build_bcl_from_tuple(tuple, tol), degree);
}

NPlusOneDilation dilate_n_plus_one(const ContractionTuple& tuple,
                                   const ComplexMatrix& x, std::size_t degree,
                                   double tol) {
  require(x.rows() == tuple.dim && x.cols() == tuple.dim,
          ErrorCode::shape_mismatch, "dilate_n_plus_one: X size");
  require(commutant_check(tuple, x, 1e-8), ErrorCode::not_a_commutant,
          "dilate_n_plus_one: X is not a contraction commuting with the tuple");

  NPlusOneDilation out;
  out.dilation = dilate(tuple, degree);
  // Tight stopping: the lift accuracy is limited by the G_j accuracy.
  const DefectDecomposition dd = defect_decomposition(tuple, x, 1e-12);
  const LiftResult lift = build_lift(tuple, x, out.dilation, dd);
  out.theta = lift.theta;
  out.certificate.merge(lift.certificate, "lift");
  const Certificate vcert = verify_lift(out.dilation, x, lift, tol);
  out.certificate.merge(vcert, "lift_verify");

  const std::size_t dim_e = out.dilation.triple.dim_e;
  const std::size_t deg = out.dilation.degree;
  const std::size_t m = (deg + 1) * dim_e;
  require(m <= 2048, ErrorCode::invalid_argument,
          "dilate_n_plus_one: Hardy section too large (" + std::to_string(m) +
              "); lower the degree or use a purer tuple");

  // One Schaffer step for Y: factor I - M_Theta^* M_Theta = E^H E on the
  // degree window. The Gram is assembled from the honest Toeplitz blocks
  // C_d = sum_p Theta_{p+d}^H Theta_p of the full operator, not from the
  // finite section (whose edge junk would fake defect mass).
  const std::size_t n_coeffs = lift.theta.size();
  std::vector<ComplexMatrix> gram(deg + 1, ComplexMatrix(dim_e, dim_e));
  for (std::size_t d = 0; d <= deg; ++d)
    for (std::size_t p = 0; p + d < n_coeffs; ++p)
      multiply_acc(lift.theta[p + d].adjoint(), lift.theta[p], gram[d]);
  ComplexMatrix gap = ComplexMatrix::identity(m);
  for (std::size_t k = 0; k <= deg; ++k)
    for (std::size_t l = 0; l <= deg; ++l) {
      const std::size_t d = k >= l ? k - l : l - k;
      const ComplexMatrix blockv =
          k >= l ? gram[d] : ComplexMatrix(gram[d].adjoint());
      ComplexMatrix cur = gap.block(k * dim_e, l * dim_e, dim_e, dim_e);
      cur -= blockv;
      gap.set_block(k * dim_e, l * dim_e, cur);
    }

  linalg::HermEig eig = linalg::herm_eig(gap);
  double mn = 0.0;
  for (double v : eig.values) mn = std::min(mn, v);
  require(mn >= -1e-6, ErrorCode::not_a_contraction,
          "dilate_n_plus_one: lift section is not contractive (min eig " +
              std::to_string(mn) + ")");
  std::size_t rank = 0;
  for (double v : eig.values)
    if (v > 1e-10) ++rank;
  out.e_factor = ComplexMatrix(rank, m);
  {
    std::size_t row = 0;
    for (std::size_t k = m; k-- > 0 && row < rank;) {
      if (eig.values[k] <= 1e-10) continue;
      const double s = std::sqrt(eig.values[k]);
      for (std::size_t col = 0; col < m; ++col)
        out.e_factor(row, col) = s * std::conj(eig.vectors(col, k));
      ++row;
    }
  }
  // Y isometry on the window: only the PSD clamp is lost.
  out.certificate.add(
      "y_isometry",
      linalg::op_norm(gap - out.e_factor.adjoint() * out.e_factor), 1e-6);
  out.slots = 3;

  // The degree window sees the full operator exactly up to the symbol tail
  // that leaks past it; report where the tail dies.
  double tail_sum = 0.0;
  for (std::size_t k = n_coeffs; k-- > 0;) {
    tail_sum += linalg::op_norm(lift.theta[k]);
    if (tail_sum > 1e-8) {
      out.certificate.add_info("theta_edge_degree", static_cast<double>(k));
      break;
    }
  }

  for (std::size_t i = 0; i < tuple.n(); ++i) {
    const ComplexMatrix phi0 = phi_coeff0(out.dilation.triple, i);
    const ComplexMatrix phi1 = phi_coeff1(out.dilation.triple, i);

    // V~_i is isometric on the span of Y-powers iff M_{Phi_i} is isometric
    // (two constant block identities) and commutes with M_Theta (the symbol
    // commutator, verified by verify_lift and repeated here).
    const ComplexMatrix ide = ComplexMatrix::identity(dim_e);
    out.certificate.add(
        idx1("v_isometry", i),
        std::max(linalg::op_norm(phi0.adjoint() * phi0 +
                                 phi1.adjoint() * phi1 - ide),
                 linalg::op_norm(phi1.adjoint() * phi0)),
        1e-10);
    out.certificate.add(idx1("v_gram_commute", i),
                        vcert.value(idx1("commute_with_phi", i)), tol);

    // Concrete slot action y_i(D x) = D(M_{Phi_i} x), resolved on the
    // sub-window where the shifted column stays inside the window.
    const std::size_t safe_cols = deg * dim_e;
    ComplexMatrix e_safe = out.e_factor.block(0, 0, rank, safe_cols);
    ComplexMatrix ea(rank, safe_cols);
    for (std::size_t l = 0; l * dim_e < safe_cols; ++l) {
      ComplexMatrix col = out.e_factor.block(0, l * dim_e, rank, dim_e) * phi0;
      col += out.e_factor.block(0, (l + 1) * dim_e, rank, dim_e) * phi1;
      ea.set_block(0, l * dim_e, col);
    }
    ComplexMatrix yi = ea * linalg::pinv(e_safe, 1e-7);
    out.certificate.add(idx1("slot_fit", i),
                        linalg::op_norm(yi * e_safe - ea), 1e-6);
    out.slot_unitaries.push_back(std::move(yi));
  }

  // Intertwining of the composed dilation map Pi' = (Pi, 0):
  //   Y^H Pi' = M_Theta^H Pi  vs  Pi X^H   (the lift residual), and
  //   V~_i^H Pi' = M_Phi_i^H Pi  vs  Pi T_i^H  (the dilation residuals).
  out.certificate.add("intertwine_x", vcert.value("lift_intertwine"), tol);
  for (std::size_t i = 0; i < tuple.n(); ++i)
    out.certificate.add(
        idx1("intertwine", i),
        out.dilation.certificate.value(idx1("intertwining", i)), tol);
  return out;
}

}  // namespace dilatrix
