#include "dilatrix/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dilatrix/linalg.hpp"

namespace dilatrix {

namespace {

std::string idx1(const char* name, std::size_t i) {
  return std::string(name) + "[" + std::to_string(i) + "]";
}

constexpr double kUnitTol = 1e-8;

}  // namespace

ComplexMatrix TransferRealization::full() const {
  ComplexMatrix w(dim_k + dim_g, dim_k + dim_g);
  w.set_block(0, 0, a);
  w.set_block(0, dim_k, b);
  w.set_block(dim_k, 0, c);
  w.set_block(dim_k, dim_k, d);
  return w;
}

TransferRealization TransferRealization::from_full(const ComplexMatrix& w,
                                                   std::size_t dim_k) {
  require(w.is_square() && w.rows() >= dim_k, ErrorCode::shape_mismatch,
          "realization split out of range");
  TransferRealization out;
  out.dim_k = dim_k;
  out.dim_g = w.rows() - dim_k;
  out.a = w.block(0, 0, dim_k, dim_k);
  out.b = w.block(0, dim_k, dim_k, out.dim_g);
  out.c = w.block(dim_k, 0, out.dim_g, dim_k);
  out.d = w.block(dim_k, dim_k, out.dim_g, out.dim_g);
  return out;
}

ComplexMatrix transfer_eval(const TransferRealization& w, cplx z) {
  if (w.dim_g == 0) return w.a;
  const ComplexMatrix res = linalg::linsolve(
      ComplexMatrix::identity(w.dim_g) - z * w.d, w.c);
  return w.a + z * (w.b * res);
}

ComplexMatrix transfer_adjoint_eval(const TransferRealization& w, cplx z) {
  if (w.dim_g == 0) return w.a.adjoint();
  const ComplexMatrix res = linalg::linsolve(
      ComplexMatrix::identity(w.dim_g) - z * w.d.adjoint(), w.b.adjoint());
  return w.a.adjoint() + z * (w.c.adjoint() * res);
}

std::vector<ComplexMatrix> transfer_adjoint_coefficients(
    const TransferRealization& w, std::size_t count) {
  std::vector<ComplexMatrix> out;
  out.reserve(count);
  if (count == 0) return out;
  out.push_back(w.a.adjoint());
  if (w.dim_g == 0) {
    for (std::size_t k = 1; k < count; ++k)
      out.push_back(ComplexMatrix(w.dim_k, w.dim_k));
    return out;
  }
  const ComplexMatrix bh = w.b.adjoint();
  const ComplexMatrix dh = w.d.adjoint();
  ComplexMatrix lead = w.c.adjoint();  // C* D*^{k-1}
  for (std::size_t k = 1; k < count; ++k) {
    out.push_back(lead * bh);
    if (k + 1 < count) lead = lead * dh;
  }
  return out;
}

bool commutant_check(const ContractionTuple& tuple, const ComplexMatrix& x,
                     double tol) {
  require(x.rows() == tuple.dim && x.cols() == tuple.dim,
          ErrorCode::shape_mismatch, "commutant_check: X size");
  if (linalg::op_norm(x) > 1.0 + tol) return false;
  for (const auto& t : tuple.ops)
    if (linalg::op_norm(x * t - t * x) > tol) return false;
  return true;
}

DefectDecomposition defect_decomposition(const ContractionTuple& tuple,
                                         const ComplexMatrix& x, double tol,
                                         std::size_t max_rounds) {
  require(commutant_check(tuple, x, 1e-6), ErrorCode::not_a_commutant,
          "defect_decomposition: X is not in the commutant");
  if (max_rounds == 0) max_rounds = 10 * kDefaultDegreeCap;

  const std::size_t n = tuple.n();
  const ComplexMatrix base =
      ComplexMatrix::identity(tuple.dim) - x * x.adjoint();
  const double stop = tol / 10.0;

  DefectDecomposition out;
  out.g.reserve(n);
  std::size_t worst_iters = 0;
  for (std::size_t j = 0; j < n; ++j) {
    ComplexMatrix y = base;
    double change = 0.0;
    double prev_change = 1e300;
    std::size_t stalled = 0;
    bool done = false;
    std::size_t r = 0;
    for (; r < max_rounds; ++r) {
      ComplexMatrix next = y;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        next = tuple.ops[i] * next * tuple.ops[i].adjoint();
      }
      change = (next - y).frobenius_norm();
      y = next;
      if (change <= stop) {
        // Geometric tail estimate: distance to the limit is about
        // change * q / (1 - q); keep iterating until that is inside the
        // budget too, not just the per-cycle change.
        const double q =
            std::min(0.999, prev_change > 0.0 ? change / prev_change : 0.0);
        if (change * q / (1.0 - q) <= stop) {
          done = true;
          break;
        }
      }
      // Geometric decay bottoms out at roundoff before very tight targets;
      // accept a stalled iteration once the change is far below certificate
      // scale.
      stalled = change >= 0.5 * prev_change ? stalled + 1 : 0;
      if (change <= 1e-11 && stalled >= 3) {
        done = true;
        break;
      }
      prev_change = change;
    }
    require(done, ErrorCode::no_convergence,
            "defect_decomposition: G_" + std::to_string(j) +
                " did not converge in " + std::to_string(max_rounds) +
                " rounds (last change " + std::to_string(change) + ")");
    out.g.push_back(0.5 * (y + y.adjoint()));
    worst_iters = std::max(worst_iters, r + 1);
    out.residual = std::max(out.residual, change);
  }
  out.iterations = worst_iters;

  ComplexMatrix sum(tuple.dim, tuple.dim);
  for (const auto& g : out.g) sum += g;
  out.certificate.add("sum_identity", linalg::op_norm(base - sum), tol);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      out.certificate.add(
          "invariance[" + std::to_string(j) + "][" + std::to_string(i) + "]",
          linalg::op_norm(out.g[j] -
                          tuple.ops[i] * out.g[j] * tuple.ops[i].adjoint()),
          tol);
    }
    auto eig = linalg::herm_eig(out.g[j]);
    out.certificate.add_info(idx1("min_eigenvalue", j),
                             eig.values.empty() ? 0.0 : eig.values.front());
  }
  return out;
}

IntertwinerResult intertwiner_y(const TransferRealization& w,
                                const ComplexMatrix& u, double tol) {
  const std::size_t e = w.dim_k;
  const std::size_t g = w.dim_g;
  require(u.rows() == e && u.cols() == e, ErrorCode::shape_mismatch,
          "intertwiner_y: U size");
  const ComplexMatrix wf = w.full();
  const double unit = linalg::op_norm(
      wf.adjoint() * wf - ComplexMatrix::identity(e + g));
  require(unit <= kUnitTol, ErrorCode::not_unitary,
          "intertwiner_y: realization is not unitary (residual " +
              std::to_string(unit) + ")");

  IntertwinerResult out;
  out.certificate.add("w_unitary", unit, kUnitTol);

  // Hypothesis residuals: AU = UA and (B D^{k-1} C) U = U (B D^{k-1} C).
  double hyp = linalg::op_norm(w.a * u - u * w.a);
  {
    ComplexMatrix lead = w.b;  // B D^{k-1}
    for (std::size_t k = 0; k < 2 * g + 4; ++k) {
      const ComplexMatrix bc = lead * w.c;
      hyp = std::max(hyp, linalg::op_norm(bc * u - u * bc));
      lead = lead * w.d;
    }
  }
  out.certificate.add("coefficient_commutation", hyp, tol * 10);

  if (g == 0) {
    out.y = ComplexMatrix(0, 0);
    out.certificate.add("relation_by", 0.0, tol);
    out.certificate.add("relation_cu", 0.0, tol);
    out.certificate.add("relation_dy", 0.0, tol);
    return out;
  }

  // Krylov span of {D^k C}: the pure part of D.
  std::vector<ComplexMatrix> krylov, krylov_u;
  ComplexMatrix cur = w.c;
  ComplexMatrix cur_u = w.c * u;
  ComplexMatrix basis(g, 0);
  for (std::size_t k = 0; k <= g; ++k) {
    krylov.push_back(cur);
    krylov_u.push_back(cur_u);
    ComplexMatrix stacked(g, (k + 1) * e);
    for (std::size_t t = 0; t <= k; ++t)
      stacked.set_block(0, t * e, krylov[t]);
    ComplexMatrix nb = linalg::range_basis(stacked, 1e-10);
    if (nb.cols() == basis.cols()) {
      basis = nb;
      break;
    }
    basis = nb;
    cur = w.d * cur;
    cur_u = w.d * cur_u;
  }
  const std::size_t g1 = basis.cols();
  out.pure_dim = g1;

  if (g1 == 0) {
    out.y = ComplexMatrix(g, g);  // C = 0: Y = 0 works
  } else {
    ComplexMatrix km(g1, krylov.size() * e), km_u(g1, krylov.size() * e);
    for (std::size_t t = 0; t < krylov.size(); ++t) {
      km.set_block(0, t * e, basis.adjoint() * krylov[t]);
      km_u.set_block(0, t * e, basis.adjoint() * krylov_u[t]);
    }
    ComplexMatrix y1 = linalg::solve_right(km, km_u);
    out.certificate.add("krylov_fit", linalg::op_norm(y1 * km - km_u), tol);
    const double iso = linalg::op_norm(y1.adjoint() * y1 -
                                       ComplexMatrix::identity(g1));
    out.certificate.add("y_isometry", iso, tol * 10);
    if (iso <= tol * 10) y1 = linalg::closest_unitary(y1);
    out.y = basis * y1 * basis.adjoint();
  }

  const double r_by = linalg::op_norm(w.b * out.y - u * w.b);
  const double r_cu = linalg::op_norm(w.c * u - out.y * w.c);
  const double r_dy = linalg::op_norm(w.d * out.y - out.y * w.d);
  out.certificate.add("relation_by", r_by, tol);
  out.certificate.add("relation_cu", r_cu, tol);
  out.certificate.add("relation_dy", r_dy, tol);
  require(r_by <= tol && r_cu <= tol && r_dy <= tol,
          ErrorCode::relation_residual_exceeded,
          "intertwiner_y: relations exceed tolerance (BY:" +
              std::to_string(r_by) + " CU:" + std::to_string(r_cu) +
              " DY:" + std::to_string(r_dy) + ")");
  return out;
}

namespace {

// W_j^(i) recovered from the dilating triple: U_i* = direct sum of W_j^(i).
ComplexMatrix wij_block(const DilationResult& dil, std::size_t i,
                        std::size_t j) {
  const std::size_t off = dil.offsets[j];
  const std::size_t r = dil.defects[j].rank;
  return dil.triple.unitaries[i].adjoint().block(off, off, r, r);
}

struct LiftBlock {
  TransferRealization realization;
  std::vector<ComplexMatrix> theta;  // coefficients on K_j
  Certificate certificate;
};

LiftBlock build_lift_block(const ContractionTuple& tuple,
                           const ComplexMatrix& x, const DilationResult& dil,
                           const ComplexMatrix& gj, std::size_t j,
                           std::size_t degree, double tol) {
  const std::size_t n = tuple.n();
  const std::size_t dim = tuple.dim;
  const std::size_t r = dil.defects[j].rank;
  const ComplexMatrix pt = tuple.product();

  LiftBlock out;

  // Coordinates: K_j through the defect basis, G~ through the range basis of
  // G_j^{1/2} (clamped Hermitian square root).
  const ComplexMatrix dj_coords =
      dil.defects[j].basis.adjoint() * dil.defects[j].sqrt;  // r x dim
  const ComplexMatrix gsqrt = linalg::psd_sqrt(gj, 1e-8, "G_j");
  linalg::HermEig eig = linalg::herm_eig(gj);
  std::size_t g = 0;
  for (double v : eig.values)
    if (v > 1e-10) ++g;
  ComplexMatrix gbasis(dim, g);
  {
    std::size_t c = 0;
    for (std::size_t k = dim; k-- > 0;) {
      if (eig.values[k] <= 1e-10) continue;
      for (std::size_t row = 0; row < dim; ++row)
        gbasis(row, c) = eig.vectors(row, k);
      ++c;
    }
  }
  const ComplexMatrix g_coords = gbasis.adjoint() * gsqrt;  // g x dim

  // Y~_i on G~ (i != j): G^{1/2} h -> G^{1/2} T_i* h. Unitary in finite
  // dimensions; certified both ways, then polished.
  std::vector<ComplexMatrix> yi(n, ComplexMatrix(g, g));
  for (std::size_t i = 0; i < n; ++i) {
    if (i == j || g == 0) continue;
    const ComplexMatrix target = g_coords * tuple.ops[i].adjoint();
    ComplexMatrix y = linalg::solve_right(g_coords, target);
    out.certificate.add(idx1("ytilde_fit", i),
                        linalg::op_norm(y * g_coords - target), tol);
    const ComplexMatrix idg = ComplexMatrix::identity(g);
    out.certificate.add(idx1("ytilde_isometry", i),
                        linalg::op_norm(y.adjoint() * y - idg), kUnitTol);
    out.certificate.add(idx1("ytilde_co_isometry", i),
                        linalg::op_norm(y * y.adjoint() - idg), kUnitTol);
    yi[i] = linalg::closest_unitary(y);
  }
  if (g > 0) {
    ComplexMatrix yj = ComplexMatrix::identity(g);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      yj = yj * yi[i].adjoint();
    }
    yi[j] = yj;
  }

  // V_i = diag(W_j^(i), Y_i) on K_j + G.
  std::vector<ComplexMatrix> vi;
  vi.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    vi.push_back(direct_sum({wij_block(dil, i, j), yi[i]}));

  // M and N spanning pairs: (D_j h, G^{1/2} P_T* h) -> (D_j X* h, G^{1/2} h).
  const std::size_t s = r + g;
  ComplexMatrix mv(s, dim), nv(s, dim);
  mv.set_block(0, 0, dj_coords);
  mv.set_block(r, 0, g_coords * pt.adjoint());
  nv.set_block(0, 0, dj_coords * x.adjoint());
  nv.set_block(r, 0, g_coords);

  // Grow M~ = closure of M under the V_i* (i != j), keeping image pairs.
  // The growth threshold and the least-squares rank cut below must agree:
  // directions present only below kSubspaceTol are data noise, and R is 0
  // there ("R = 0 on the complement").
  constexpr double kSubspaceTol = 1e-8;
  std::vector<ComplexMatrix> span_v{mv}, span_w{nv};
  ComplexMatrix basis = linalg::range_basis(mv, kSubspaceTol);
  ComplexMatrix frontier_v = mv, frontier_w = nv;
  std::size_t rounds = 0;
  for (; rounds < s + 2; ++rounds) {
    std::vector<ComplexMatrix> next_v, next_w;
    bool grew = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      const ComplexMatrix cv = vi[i].adjoint() * frontier_v;
      const ComplexMatrix cw = vi[i].adjoint() * frontier_w;
      span_v.push_back(cv);
      span_w.push_back(cw);
      // Novelty filter: keep only directions outside the current basis.
      for (std::size_t col = 0; col < cv.cols(); ++col) {
        ComplexMatrix v(s, 1);
        for (std::size_t row = 0; row < s; ++row) v(row, 0) = cv(row, col);
        ComplexMatrix p = v - basis * (basis.adjoint() * v);
        const double nrm = p.frobenius_norm();
        if (nrm > kSubspaceTol) {
          grew = true;
          ComplexMatrix nb(s, basis.cols() + 1);
          nb.set_block(0, 0, basis);
          p *= cplx(1.0 / nrm, 0.0);
          nb.set_block(0, basis.cols(), p);
          basis = nb;
          ComplexMatrix wcol(s, 1);
          for (std::size_t row = 0; row < s; ++row) wcol(row, 0) = cw(row, col);
          next_v.push_back(v);
          next_w.push_back(wcol);
        }
      }
    }
    if (!grew) break;
    require(basis.cols() <= s, ErrorCode::subspace_growth_diverged,
            "build_lift: subspace rank exceeded the ambient dimension");
    ComplexMatrix fv(s, next_v.size()), fw(s, next_w.size());
    for (std::size_t t = 0; t < next_v.size(); ++t) {
      fv.set_block(0, t, next_v[t]);
      fw.set_block(0, t, next_w[t]);
    }
    frontier_v = fv;
    frontier_w = fw;
  }
  require(rounds < s + 2, ErrorCode::subspace_growth_diverged,
          "build_lift: M~ failed to stabilize");
  out.certificate.add_info("growth_rounds", static_cast<double>(rounds));
  out.certificate.add_info("mtilde_dim", static_cast<double>(basis.cols()));

  // R = R~ on M~, 0 on the complement: rank-cut least squares.
  std::size_t total_cols = 0;
  for (const auto& m : span_v) total_cols += m.cols();
  ComplexMatrix av(s, total_cols), aw(s, total_cols);
  std::size_t at = 0;
  for (std::size_t t = 0; t < span_v.size(); ++t) {
    av.set_block(0, at, span_v[t]);
    aw.set_block(0, at, span_w[t]);
    at += span_v[t].cols();
  }
  ComplexMatrix rmat = aw * linalg::pinv(av, kSubspaceTol);
  out.certificate.add("rtilde_fit", linalg::op_norm(rmat * av - aw), tol);
  const double rnorm = linalg::op_norm(rmat);
  out.certificate.add("r_contraction", std::max(0.0, rnorm - 1.0), tol);
  require(rnorm <= 1.0 + tol, ErrorCode::numeric_failure,
          "build_lift: extension is not a contraction (norm " +
              std::to_string(rnorm) + ")");
  // Same polish policy as the defect unitaries: shave the roundoff excess.
  if (rnorm > 1.0) rmat *= cplx(1.0 / rnorm, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    out.certificate.add(idx1("commute_rv", i),
                        linalg::op_norm(rmat * vi[i] - vi[i] * rmat),
                        tol);

  out.realization = TransferRealization::from_full(rmat, r);
  // Coefficient budget: the Hardy degree bounds Pi, but the symbol's own
  // tail is governed by the pure part of D and can need far more terms
  // (compressions have tiny Hardy budgets). Extend until the coefficients
  // are dead, then the budgets get reconciled by the caller.
  const std::size_t cap = 2048;
  out.theta = transfer_adjoint_coefficients(out.realization, degree + 1);
  if (out.realization.dim_g > 0) {
    const ComplexMatrix bh = out.realization.b.adjoint();
    const ComplexMatrix dh = out.realization.d.adjoint();
    // lead = C^H (D^H)^(m-1) for the next coefficient index m = theta.size()
    ComplexMatrix lead = out.realization.c.adjoint();
    for (std::size_t t = 0; t + 1 < out.theta.size(); ++t) lead = lead * dh;
    std::size_t dead = 0;
    while (out.theta.size() < cap && dead < 3) {
      ComplexMatrix next = lead * bh;
      if (linalg::op_norm(next) <= 1e-14)
        ++dead;
      else
        dead = 0;
      out.theta.push_back(std::move(next));
      lead = lead * dh;
    }
  }
  return out;
}

}  // namespace

LiftResult build_lift(const ContractionTuple& tuple, const ComplexMatrix& x,
                      const DilationResult& dilation,
                      const DefectDecomposition& dd, double tol) {
  require(dd.g.size() == tuple.n(), ErrorCode::shape_mismatch,
          "build_lift: defect decomposition arity");
  require(commutant_check(tuple, x, 1e-6), ErrorCode::not_a_commutant,
          "build_lift: X is not in the commutant");

  const std::size_t n = tuple.n();
  const std::size_t dim_e = dilation.triple.dim_e;
  LiftResult out;
  out.degree = dilation.degree;
  out.realizations.resize(n);
  out.theta_blocks.resize(n);

  std::size_t n_coeffs = dilation.degree + 1;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t r = dilation.defects[j].rank;
    if (r == 0) continue;
    LiftBlock block = build_lift_block(tuple, x, dilation, dd.g[j], j,
                                       dilation.degree, tol);
    out.certificate.merge(block.certificate, "j" + std::to_string(j));
    n_coeffs = std::max(n_coeffs, block.theta.size());
    out.realizations[j] = block.realization;
    out.theta_blocks[j] = std::move(block.theta);
  }
  out.theta.assign(n_coeffs, ComplexMatrix(dim_e, dim_e));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < out.theta_blocks[j].size(); ++k)
      out.theta[k].set_block(dilation.offsets[j], dilation.offsets[j],
                             out.theta_blocks[j][k]);
  }
  return out;
}

Certificate verify_lift(const DilationResult& dilation, const ComplexMatrix& x,
                        const LiftResult& lift, double tol, std::size_t grid) {
  Certificate cert;
  const std::size_t dim_e = dilation.triple.dim_e;
  const std::size_t n = dilation.triple.n();
  require(!lift.theta.empty() && lift.theta[0].rows() == dim_e,
          ErrorCode::shape_mismatch, "verify_lift: symbol size");

  // (a) Pi X* = M_Theta* Pi
  const ComplexMatrix lhs = dilation.pi * x.adjoint();
  const ComplexMatrix rhs =
      poly_symbol_adjoint_apply_stacked(lift.theta, dilation.pi, dim_e);
  cert.add("lift_intertwine", linalg::op_norm(lhs - rhs), tol);

  // (b) commutation with each M_{Phi_i}: the truncated commutator is the
  // Toeplitz section of the coefficient-commutator symbol.
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexMatrix p0 = phi_coeff0(dilation.triple, i);
    const ComplexMatrix p1 = phi_coeff1(dilation.triple, i);
    std::vector<ComplexMatrix> comm(lift.theta.size() + 1,
                                    ComplexMatrix(dim_e, dim_e));
    for (std::size_t m = 0; m < lift.theta.size() + 1; ++m) {
      ComplexMatrix c(dim_e, dim_e);
      if (m < lift.theta.size()) {
        c += lift.theta[m] * p0;
        c -= p0 * lift.theta[m];
      }
      if (m >= 1) {
        c += lift.theta[m - 1] * p1;
        c -= p1 * lift.theta[m - 1];
      }
      comm[m] = c;
    }
    double r = 0.0;
    const std::size_t samples = 64;
    for (std::size_t t = 0; t < samples; ++t) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(t) / samples;
      r = std::max(r, linalg::op_norm(
                          poly_symbol_eval(comm, cplx(std::cos(th),
                                                      std::sin(th)))));
    }
    cert.add(idx1("commute_with_phi", i), r, tol);
    worst = std::max(worst, r);
  }
  cert.add_info("commute_max", worst);

  // (c) contractive multiplier on the circle.
  double excess = 0.0;
  for (std::size_t t = 0; t < grid; ++t) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(t) / grid;
    const double nrm = linalg::op_norm(
        poly_symbol_eval(lift.theta, cplx(std::cos(th), std::sin(th))));
    excess = std::max(excess, nrm - 1.0);
  }
  cert.add("multiplier_norm", std::max(0.0, excess), 1e-8);

  cert.add_info("theta_tail", linalg::op_norm(lift.theta.back()));
  double dtail = 0.0;
  for (const auto& re : lift.realizations) {
    if (re.dim_k == 0 && re.dim_g == 0) continue;
    dtail = std::max(
        dtail, std::pow(linalg::op_norm(re.d),
                        static_cast<double>(lift.degree + 1)));
  }
  cert.add_info("d_tail", dtail);
  cert.add_info("pi_tail", dilation.tail);
  return cert;
}

std::vector<std::vector<ComplexMatrix>> commutant_block_structure(
    const BclTriple& triple, const std::vector<ComplexMatrix>& theta,
    double tol) {
  BclBlockForm form = bcl_block_form(triple);
  const std::size_t n = triple.n();
  std::vector<std::vector<ComplexMatrix>> out(n);

  for (std::size_t k = 0; k < theta.size(); ++k) {
    const ComplexMatrix& a = theta[k];
    require(a.rows() == triple.dim_e && a.cols() == triple.dim_e,
            ErrorCode::shape_mismatch, "commutant_block_structure: A_k size");
    ComplexMatrix blockdiag(triple.dim_e, triple.dim_e);
    for (std::size_t i = 0; i < n; ++i) {
      const ComplexMatrix& b = form.bases[i];
      if (b.cols() == 0) continue;
      blockdiag += (b * (b.adjoint() * a * b)) * b.adjoint();
    }
    const double off = linalg::op_norm(a - blockdiag);
    require(off <= tol, ErrorCode::not_block_diagonal,
            "commutant_block_structure: coefficient " + std::to_string(k) +
                " has off-block mass " + std::to_string(off));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexMatrix& b = form.bases[i];
    for (std::size_t k = 0; k < theta.size(); ++k)
      out[i].push_back(b.adjoint() * theta[k] * b);
  }
  return out;
}

}  // namespace dilatrix
