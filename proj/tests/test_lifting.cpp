#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dilatrix/dilation.hpp"
#include "dilatrix/lifting.hpp"
#include "dilatrix/linalg.hpp"
#include "test_support.hpp"

using namespace dilatrix;
using testsup::scalar;
using testsup::scalar_tuple;

namespace {

struct Planted {
  TransferRealization w;
  ComplexMatrix u;   // isometry on K commuting with tau_W
  ComplexMatrix y0;  // the planted slot contraction
};

// Unitary realization W commuting with diag(U, Y0) by construction: shared
// eigenvalue groups straddling the K/G boundary, W an arbitrary unitary
// within each group.
Planted planted_realization(std::uint64_t seed, std::size_t e,
                            std::size_t g) {
  Rng rng(seed);
  const std::size_t groups = 2;
  std::vector<cplx> lambda(groups);
  for (auto& l : lambda) l = rng.unit_cplx();

  std::vector<std::size_t> assign_e(e), assign_g(g);
  for (std::size_t i = 0; i < e; ++i) assign_e[i] = i % groups;
  for (std::size_t i = 0; i < g; ++i) assign_g[i] = i % groups;

  const ComplexMatrix be = random_unitary(rng, e);
  const ComplexMatrix bg = random_unitary(rng, g);

  std::vector<cplx> du(e), dy(g);
  for (std::size_t i = 0; i < e; ++i) du[i] = lambda[assign_e[i]];
  for (std::size_t i = 0; i < g; ++i) dy[i] = lambda[assign_g[i]];

  Planted out;
  out.u = be * ComplexMatrix::diagonal(du) * be.adjoint();
  out.y0 = bg * ComplexMatrix::diagonal(dy) * bg.adjoint();

  // frame for E + G in which diag(U, Y0) is diagonal
  ComplexMatrix frame(e + g, e + g);
  frame.set_block(0, 0, be);
  frame.set_block(e, e, bg);

  // unitary block per eigenvalue group, scattered back to the slots
  ComplexMatrix wdiag(e + g, e + g);
  for (std::size_t t = 0; t < groups; ++t) {
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < e; ++i)
      if (assign_e[i] == t) slots.push_back(i);
    for (std::size_t i = 0; i < g; ++i)
      if (assign_g[i] == t) slots.push_back(e + i);
    const ComplexMatrix block = random_unitary(rng, slots.size());
    for (std::size_t a = 0; a < slots.size(); ++a)
      for (std::size_t b = 0; b < slots.size(); ++b)
        wdiag(slots[a], slots[b]) = block(a, b);
  }
  out.w = TransferRealization::from_full(frame * wdiag * frame.adjoint(), e);
  return out;
}

}  // namespace

TEST_CASE("commutant_check") {
  GenSpec spec;
  spec.seed = 2;
  spec.n = 2;
  spec.dims = {2, 2};
  const auto t = gen_b20_pair(spec);
  CHECK(commutant_check(t, ComplexMatrix::identity(t.dim)));
  CHECK(commutant_check(t, t.product()));
  ComplexMatrix noisy = t.product();
  noisy(0, t.dim - 1) += cplx(0.05, 0.02);
  CHECK_FALSE(commutant_check(t, noisy));
}

TEST_CASE("defect decomposition on scalar pairs") {
  SUBCASE("half and co-isometry") {
    for (double c : {0.2, 0.7}) {
      const auto t = scalar_tuple({0.5, 1.0});
      const auto dd = defect_decomposition(t, scalar(c));
      CHECK(std::abs(dd.g[0](0, 0).real() - (1.0 - c * c)) <= 1e-9);
      CHECK(dd.g[1].max_abs() <= 1e-9);
      CHECK(dd.certificate.passed());
    }
  }
  SUBCASE("zero and co-isometry") {
    const auto t = scalar_tuple({0.0, 1.0});
    const auto dd = defect_decomposition(t, scalar(0.6));
    CHECK(std::abs(dd.g[0](0, 0).real() - 0.64) <= 1e-9);
    CHECK(dd.g[1].max_abs() <= 1e-9);
  }
  SUBCASE("identity commutant has zero defect") {
    const auto t = scalar_tuple({0.5, 1.0});
    const auto dd = defect_decomposition(t, scalar(1.0));
    for (const auto& g : dd.g) CHECK(g.max_abs() <= 1e-12);
  }
  SUBCASE("non-commutant rejected") {
    GenSpec spec;
    spec.seed = 6;
    spec.n = 2;
    spec.dims = {2, 2};
    const auto t = gen_b20_pair(spec);
    ComplexMatrix bad(t.dim, t.dim);
    bad(0, t.dim - 1) = 0.9;
    CHECK_THROWS_AS((void)defect_decomposition(t, bad), Error);
  }
}

TEST_CASE("defect decomposition invariants on generated pairs") {
  const auto pool = testsup::member_pool(10, 4321);
  std::uint64_t s = 0;
  for (const auto& t : pool) {
    GenSpec cspec;
    cspec.seed = 900 + s++;
    const auto x = gen_commutant(t, cspec);
    const auto dd = defect_decomposition(t, x, 1e-8);
    CHECK(dd.certificate.passed());
    CHECK(dd.certificate.value("sum_identity") <= 1e-8);
  }
}

TEST_CASE("intertwiner on hand examples") {
  SUBCASE("flip realization recovers u") {
    TransferRealization w;
    w.dim_k = 1;
    w.dim_g = 1;
    w.a = scalar(0.0);
    w.b = scalar(1.0);
    w.c = scalar(1.0);
    w.d = scalar(0.0);
    const cplx u = std::polar(1.0, 0.9);
    ComplexMatrix um(1, 1);
    um(0, 0) = u;
    const auto r = intertwiner_y(w, um);
    CHECK(std::abs(r.y(0, 0) - u) <= 1e-12);
    CHECK(r.certificate.passed());
    // tau_W(z) = z
    CHECK(std::abs(transfer_eval(w, cplx(0.3, 0.1))(0, 0) - cplx(0.3, 0.1)) <=
          1e-14);
  }
  SUBCASE("identity realization: C = 0, Y = 0") {
    TransferRealization w;
    w.dim_k = 1;
    w.dim_g = 1;
    w.a = scalar(1.0);
    w.b = scalar(0.0);
    w.c = scalar(0.0);
    w.d = scalar(1.0);
    Rng rng(77);
    ComplexMatrix um(1, 1);
    um(0, 0) = rng.unit_cplx();
    const auto r = intertwiner_y(w, um);
    CHECK(r.pure_dim == 0);
    CHECK(r.y.max_abs() <= 1e-14);
  }
  SUBCASE("non-unitary realization rejected") {
    TransferRealization w;
    w.dim_k = 1;
    w.dim_g = 1;
    w.a = scalar(0.5);
    w.b = scalar(0.0);
    w.c = scalar(0.0);
    w.d = scalar(0.5);
    CHECK_THROWS_AS((void)intertwiner_y(w, scalar(1.0)), Error);
  }
}

TEST_CASE("intertwiner on planted unitary realizations") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto p = planted_realization(seed, 2, 3);
    const auto r = intertwiner_y(p.w, p.u, 1e-10);
    CHECK(r.certificate.value("relation_by") <= 1e-10);
    CHECK(r.certificate.value("relation_cu") <= 1e-10);
    CHECK(r.certificate.value("relation_dy") <= 1e-10);
  }
}

TEST_CASE("transfer coefficients match the resolvent") {
  // tau_{W*} coefficients against exact resolvent evaluation on |z| = 1/2,
  // where the series tail is controlled even for unitary W.
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto p = planted_realization(seed * 31, 2, 2);
    const std::size_t terms = 60;  // 2^-60 tail
    const auto coeffs = transfer_adjoint_coefficients(p.w, terms);
    for (std::size_t t = 0; t < 8; ++t) {
      const double th =
          2.0 * std::numbers::pi * static_cast<double>(t) / 8.0;
      const cplx z = 0.5 * cplx(std::cos(th), std::sin(th));
      ComplexMatrix series(p.w.dim_k, p.w.dim_k);
      cplx zk(1.0, 0.0);
      for (std::size_t k = 0; k < terms; ++k) {
        ComplexMatrix term = coeffs[k];
        term *= zk;
        series += term;
        zk *= z;
      }
      CHECK(linalg::op_norm(series - transfer_adjoint_eval(p.w, z)) <= 1e-10);
    }
  }
}

TEST_CASE("build_lift scalar pipeline") {
  const auto t = scalar_tuple({0.5, 1.0});
  const auto dil = dilate(t);

  SUBCASE("X = 1/3: characterizing oracle") {
    const auto dd = defect_decomposition(t, scalar(1.0 / 3.0), 1e-12);
    CHECK(std::abs(dd.g[0](0, 0).real() - 8.0 / 9.0) <= 1e-10);
    const auto lift = build_lift(t, scalar(1.0 / 3.0), dil, dd);
    CHECK(lift.certificate.passed());
    const auto verify = verify_lift(dil, scalar(1.0 / 3.0), lift);
    CHECK(verify.value("lift_intertwine") <= 1e-6);
    // Pi has coefficients c rho^k with rho = 1/2, so the lift equation pins
    // Theta(1/2) = 1/3 for any valid lift.
    cplx val(0.0, 0.0);
    double w = 1.0;
    for (const auto& c : lift.theta) {
      val += w * c(0, 0);
      w *= 0.5;
    }
    CHECK(std::abs(val - cplx(1.0 / 3.0, 0.0)) <= 1e-10);
  }
  SUBCASE("X = P_T verifies") {
    const auto x = scalar(0.5);
    const auto dd = defect_decomposition(t, x, 1e-12);
    const auto lift = build_lift(t, x, dil, dd);
    const auto verify = verify_lift(dil, x, lift);
    CHECK(verify.passed());
  }
  SUBCASE("X = I gives the constant identity symbol") {
    const auto x = scalar(1.0);
    const auto dd = defect_decomposition(t, x, 1e-12);
    const auto lift = build_lift(t, x, dil, dd);
    CHECK(std::abs(lift.theta[0](0, 0) - cplx(1.0, 0.0)) <= 1e-10);
    for (std::size_t k = 1; k < 6; ++k)
      CHECK(lift.theta[k].max_abs() <= 1e-10);
    CHECK(verify_lift(dil, x, lift).passed());
  }
  SUBCASE("X = 0 gives the zero symbol") {
    const auto x = scalar(0.0);
    const auto dd = defect_decomposition(t, x, 1e-12);
    const auto lift = build_lift(t, x, dil, dd);
    for (const auto& c : lift.theta) CHECK(c.max_abs() <= 1e-10);
    CHECK(verify_lift(dil, x, lift).passed());
  }
}

TEST_CASE("lift pipeline on generated members") {
  const auto pool = testsup::member_pool(6, 31337);
  std::uint64_t s = 100;
  for (const auto& t : pool) {
    GenSpec cspec;
    cspec.seed = s++;
    const auto x = gen_commutant(t, cspec);
    const auto dil = dilate(t);
    const auto dd = defect_decomposition(t, x, 1e-12);
    const auto lift = build_lift(t, x, dil, dd);
    const auto verify = verify_lift(dil, x, lift);
    CHECK(verify.value("lift_intertwine") <= 1e-6);
    for (std::size_t i = 0; i < t.n(); ++i)
      CHECK(verify.value("commute_with_phi[" + std::to_string(i) + "]") <=
            1e-6);
    CHECK(verify.value("multiplier_norm") <= 1e-8);

    // Eq-style reconstruction: Q X* = A Q + sum B D^k C Q P_T^{*(k+1)}.
    const ComplexMatrix pt = t.product();
    for (std::size_t j = 0; j < t.n(); ++j) {
      const auto& re = lift.realizations[j];
      if (re.dim_k == 0) continue;
      const ComplexMatrix q =
          dil.defects[j].basis.adjoint() * dil.defects[j].sqrt;
      ComplexMatrix rhs = re.a * q;
      ComplexMatrix lead = re.b;  // B D^k
      ComplexMatrix ptpow = pt.adjoint();
      double dnorm = linalg::op_norm(re.d);
      for (std::size_t k = 0; k <= lift.degree; ++k) {
        rhs += lead * re.c * q * ptpow;
        lead = lead * re.d;
        ptpow = ptpow * pt.adjoint();
      }
      const double tail =
          std::pow(std::min(1.0, dnorm), static_cast<double>(lift.degree)) *
          linalg::op_norm(ptpow);
      CHECK(linalg::op_norm(q * x.adjoint() - rhs) <= 1e-7 + tail);
    }
  }
}

TEST_CASE("negative control: perturbed symbols fail verification") {
  const auto t = scalar_tuple({0.5, 1.0});
  const auto x = scalar(1.0 / 3.0);
  const auto dil = dilate(t);
  const auto dd = defect_decomposition(t, x, 1e-12);
  auto lift = build_lift(t, x, dil, dd);
  Rng rng(55);
  for (auto& c : lift.theta)
    c(0, 0) += 1e-3 * rng.gaussian_cplx();
  const auto verify = verify_lift(dil, x, lift);
  CHECK_FALSE(verify.passed());
  CHECK(verify.value("lift_intertwine") > 1e-6);
}

TEST_CASE("commutant block structure") {
  SUBCASE("shift symbol splits over the scalar triple") {
    const auto t = scalar_tuple({0.5, 1.0});
    const auto dil = dilate(t);
    std::vector<ComplexMatrix> theta{ComplexMatrix(1, 1),
                                     ComplexMatrix::identity(1)};
    const auto blocks = commutant_block_structure(dil.triple, theta, 1e-8);
    REQUIRE(blocks[0].size() == 2);
    CHECK(std::abs(blocks[0][1](0, 0) - cplx(1.0, 0.0)) <= 1e-12);
  }
  SUBCASE("constant symbols restrict blockwise") {
    BclTriple t;
    t.dim_e = 2;
    t.unitaries = {ComplexMatrix::identity(2), ComplexMatrix::identity(2)};
    ComplexMatrix p1(2, 2), p2(2, 2);
    p1(0, 0) = 1.0;
    p2(1, 1) = 1.0;
    t.projections = {p1, p2};
    std::vector<ComplexMatrix> theta{
        ComplexMatrix::diagonal({cplx(0.3, 0.1), cplx(-0.2, 0.4)})};
    const auto blocks = commutant_block_structure(t, theta, 1e-10);
    CHECK(std::abs(blocks[0][0](0, 0) - cplx(0.3, 0.1)) <= 1e-14);
    CHECK(std::abs(blocks[1][0](0, 0) - cplx(-0.2, 0.4)) <= 1e-14);
  }
  SUBCASE("off-block mass raises NotBlockDiagonal") {
    BclTriple t;
    t.dim_e = 2;
    t.unitaries = {ComplexMatrix::identity(2), ComplexMatrix::identity(2)};
    ComplexMatrix p1(2, 2), p2(2, 2);
    p1(0, 0) = 1.0;
    p2(1, 1) = 1.0;
    t.projections = {p1, p2};
    std::vector<ComplexMatrix> theta{ComplexMatrix::identity(2)};
    theta[0](0, 1) = 0.3;
    try {
      (void)commutant_block_structure(t, theta, 1e-8);
      FAIL("expected NotBlockDiagonal");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::not_block_diagonal);
    }
  }
}

TEST_CASE("commutant defect decomposition on the dilation space") {
  // G_i = diag(..., I - M_Theta_i M_Theta_i*, ...) reproduces I - M M* and
  // is invariant under the other symbols, edge excluded.
  GenSpec spec;
  spec.seed = 62;
  spec.n = 2;
  spec.dims = {2, 2};
  spec.kind = GenKind::bcl_compression;
  spec.truncation = 1;
  const auto t = gen_member(spec);
  GenSpec cspec;
  cspec.seed = 63;
  const auto x = gen_commutant(t, cspec);
  const auto dil = dilate(t);
  const auto dd = defect_decomposition(t, x, 1e-12);
  const auto lift = build_lift(t, x, dil, dd);

  const std::size_t dim_e = dil.triple.dim_e;
  const std::size_t m = (dil.degree + 1) * dim_e;
  const ComplexMatrix mth = poly_symbol_section(lift.theta, dil.degree);
  const ComplexMatrix gap = ComplexMatrix::identity(m) - mth * mth.adjoint();

  ComplexMatrix sum(m, m);
  std::vector<ComplexMatrix> gs;
  for (std::size_t j = 0; j < t.n(); ++j) {
    // picker for summand j across all degrees
    ComplexMatrix pick(m, m);
    for (std::size_t deg = 0; deg <= dil.degree; ++deg)
      for (std::size_t r = 0; r < dil.defects[j].rank; ++r) {
        const std::size_t at = deg * dim_e + dil.offsets[j] + r;
        pick(at, at) = 1.0;
      }
    const ComplexMatrix gj = pick * gap * pick;
    gs.push_back(gj);
    sum += gj;
  }
  CHECK(linalg::op_norm(drop_edge(gap - sum, dim_e)) <= 1e-8);

  for (std::size_t i = 0; i < t.n(); ++i)
    for (std::size_t j = 0; j < t.n(); ++j) {
      if (i == j) continue;
      const ComplexMatrix aj =
          mult_op_truncated(phi_coeff0(dil.triple, j),
                            phi_coeff1(dil.triple, j), dil.degree)
              .mat;
      CHECK(linalg::op_norm(drop_edge(aj * gs[i] * aj.adjoint() - gs[i],
                                      dim_e)) <= 1e-8);
    }
}

TEST_CASE("symbol commutation residual dominates the literal section") {
  // verify_lift reports the sup of the commutator symbol; for analytic
  // symbols, finite sections multiply exactly, so the literal dense
  // commutator on the window can only be smaller.
  GenSpec spec;
  spec.seed = 71;
  spec.n = 2;
  spec.dims = {1, 2};
  spec.kind = GenKind::bcl_compression;
  spec.truncation = 1;
  const auto t = gen_member(spec);
  GenSpec cspec;
  cspec.seed = 72;
  const auto x = gen_commutant(t, cspec);
  const auto dil = dilate(t);
  const auto dd = defect_decomposition(t, x, 1e-12);
  const auto lift = build_lift(t, x, dil, dd);
  const auto verify = verify_lift(dil, x, lift);

  const ComplexMatrix mth = poly_symbol_section(lift.theta, dil.degree);
  for (std::size_t i = 0; i < t.n(); ++i) {
    const ComplexMatrix ai =
        mult_op_truncated(phi_coeff0(dil.triple, i), phi_coeff1(dil.triple, i),
                          dil.degree)
            .mat;
    const double literal = linalg::op_norm(mth * ai - ai * mth);
    const double reported =
        verify.value("commute_with_phi[" + std::to_string(i) + "]");
    CHECK(literal <= reported + 1e-10);
    CHECK(literal <= 1e-8);
  }
}

TEST_CASE("norm preservation under rescaled lifting") {
  const auto t = scalar_tuple({0.5, 1.0});
  const auto dil = dilate(t);
  const ComplexMatrix x = scalar(0.4);
  const double xnorm = linalg::op_norm(x);
  ComplexMatrix xu = x;
  xu *= cplx(1.0 / xnorm, 0.0);
  const auto dd = defect_decomposition(t, xu, 1e-12);
  const auto lift = build_lift(t, xu, dil, dd);
  double sup = 0.0;
  for (std::size_t g = 0; g < 257; ++g) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(g) / 257.0;
    sup = std::max(sup, xnorm * linalg::op_norm(poly_symbol_eval(
                             lift.theta,
                             cplx(std::cos(th), std::sin(th)))));
  }
  CHECK(std::abs(sup - xnorm) <= 1e-6);
}
