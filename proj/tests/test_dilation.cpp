#include <doctest.h>

#include <cmath>

#include "dilatrix/dilation.hpp"
#include "dilatrix/linalg.hpp"
#include "test_support.hpp"

using namespace dilatrix;
using testsup::scalar;
using testsup::scalar_tuple;

TEST_CASE("w unitaries on scalar pairs") {
  SUBCASE("half and co-isometry") {
    const auto t = scalar_tuple({0.5, 1.0});
    const auto d0 = defect(t.ops[0]);
    const auto w = build_wij(t, 0, d0);
    REQUIRE(w.rank == 1);
    CHECK(std::abs(w.w[1](0, 0) - cplx(1.0, 0.0)) < 1e-12);  // D T_2* = D
    CHECK(std::abs(w.w[0](0, 0) - cplx(1.0, 0.0)) < 1e-12);
    CHECK(w.certificate.passed());
  }
  SUBCASE("zero defect is legal and flagged") {
    const auto t = scalar_tuple({0.0, 1.0});
    const auto d1 = defect(t.ops[1]);
    const auto w = build_wij(t, 1, d1);
    CHECK(w.rank == 0);
    CHECK(w.w[0].rows() == 0);
    CHECK(w.certificate.has("degenerate_defect"));
  }
  SUBCASE("random members: unitarity and commutation") {
    GenSpec spec;
    spec.seed = 5;
    spec.n = 2;
    spec.dims = {2, 2};
    const auto t = gen_b20_pair(spec);
    for (std::size_t j = 0; j < 2; ++j) {
      const auto w = build_wij(t, j, defect(t.ops[j]));
      CHECK(w.certificate.passed());
    }
  }
  SUBCASE("non-members are rejected") {
    const auto t = scalar_tuple({0.5, 0.5});
    CHECK_THROWS_AS((void)build_wij(t, 0, defect(t.ops[0])), Error);
  }
}

TEST_CASE("bcl triple from scalar members") {
  SUBCASE("half and co-isometry: shift dilation") {
    const auto t = scalar_tuple({0.5, 1.0});
    const auto b = build_bcl_from_tuple(t);
    CHECK(b.triple.dim_e == 1);
    // Phi_1(z) = z, Phi_2(z) = 1
    CHECK(std::abs(phi_eval(b.triple, 0, cplx(0.25, 0.0))(0, 0) -
                   cplx(0.25, 0.0)) < 1e-12);
    CHECK(std::abs(phi_eval(b.triple, 1, cplx(0.25, 0.0))(0, 0) -
                   cplx(1.0, 0.0)) < 1e-12);
  }
  SUBCASE("unimodular second slot becomes the constant u") {
    const cplx u = std::polar(1.0, 1.1);
    const auto t = scalar_tuple({cplx(0.0, 0.0), u});
    const auto b = build_bcl_from_tuple(t);
    CHECK(b.triple.dim_e == 1);
    CHECK(std::abs(phi_eval(b.triple, 1, cplx(0.5, 0.0))(0, 0) - u) < 1e-12);
  }
  SUBCASE("non-member rejected with NotInClass") {
    const auto t = scalar_tuple({0.5, 0.5});
    try {
      (void)build_bcl_from_tuple(t);
      FAIL("expected NotInClass");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::not_in_class);
    }
  }
  SUBCASE("random members pass validate_bcl with the class criterion") {
    const auto pool = testsup::member_pool(8, 1234);
    for (const auto& t : pool) {
      const auto b = build_bcl_from_tuple(t);
      CHECK(bcl_in_class(validate_bcl(b.triple, 1e-8)));
    }
  }
}

TEST_CASE("dilation isometry on scalar members") {
  SUBCASE("geometric series member") {
    const auto t = scalar_tuple({0.5, 1.0});
    const auto d = dilate(t);
    CHECK(d.certificate.value("pi_isometry") <= d.tail * d.tail + 1e-10);
    // Pi h = (sqrt(3)/2) (h, h/2, h/4, ...)
    const double root3_2 = std::sqrt(3.0) / 2.0;
    for (std::size_t k = 0; k < 5; ++k)
      CHECK(std::abs(std::abs(d.pi(k, 0)) - root3_2 * std::pow(0.5, k)) <
            1e-12);
    // V D_{P_T} h = (sqrt(3)/2 h, 0): isometry on the defect space
    CHECK(d.v.rows() == 1);
    CHECK(d.v.cols() == 1);
    CHECK(std::abs(std::abs(d.v(0, 0)) - 1.0) < 1e-12);
  }
  SUBCASE("pure zero times unimodular: two-term dilation map") {
    const auto t = scalar_tuple({0.0, 1.0});
    const auto d = dilate(t, 1);
    CHECK(std::abs(std::abs(d.pi(0, 0)) - 1.0) < 1e-14);
    CHECK(std::abs(d.pi(1, 0)) < 1e-14);
    for (std::size_t i = 0; i < 2; ++i)
      CHECK(d.certificate.value("intertwining[" + std::to_string(i) + "]") <=
            1e-12);
  }
  SUBCASE("degree too small") {
    const auto t = scalar_tuple({0.9, 1.0});
    try {
      (void)dilate(t, 3);  // 0.9^3 is nowhere near 1e-10
      FAIL("expected TruncationInsufficient");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::truncation_insufficient);
    }
  }
}

TEST_CASE("dilation invariants on generated members") {
  const auto pool = testsup::member_pool(10, 777);
  for (const auto& t : pool) {
    const auto d = dilate(t);
    CHECK(d.certificate.value("pi_isometry") <= d.tail * d.tail + 1e-10);
    for (std::size_t i = 0; i < t.n(); ++i)
      CHECK(d.certificate.value("intertwining[" + std::to_string(i) + "]") <=
            1e-6);
    // Factorization: the product of the dilating symbols is the shift.
    ComplexMatrix prod0 = ComplexMatrix::identity(d.triple.dim_e);
    std::vector<ComplexMatrix> coeffs{
        ComplexMatrix(d.triple.dim_e, d.triple.dim_e),
        ComplexMatrix::identity(d.triple.dim_e)};
    // multiply the affine symbols and compare with z*I
    std::vector<ComplexMatrix> acc{ComplexMatrix::identity(d.triple.dim_e)};
    for (std::size_t i = 0; i < t.n(); ++i) {
      std::vector<ComplexMatrix> next(acc.size() + 1,
                                      ComplexMatrix(d.triple.dim_e,
                                                    d.triple.dim_e));
      for (std::size_t k = 0; k < acc.size(); ++k) {
        next[k] += acc[k] * phi_coeff0(d.triple, i);
        next[k + 1] += acc[k] * phi_coeff1(d.triple, i);
      }
      acc = std::move(next);
    }
    double residual = linalg::op_norm(acc[1] - prod0);
    residual = std::max(residual, linalg::op_norm(acc[0]));
    for (std::size_t k = 2; k < acc.size(); ++k)
      residual = std::max(residual, linalg::op_norm(acc[k]));
    CHECK(residual <= 1e-12);
  }
}

TEST_CASE("n plus one dilation") {
  SUBCASE("scalar pipeline with X = 1/3") {
    const auto t = scalar_tuple({0.5, 1.0});
    const auto r = dilate_n_plus_one(t, scalar(1.0 / 3.0));
    CHECK(r.certificate.value("intertwine_x") <= 1e-6);
    CHECK(r.certificate.value("y_isometry") <= 1e-8);
    CHECK(r.certificate.passed());
  }
  SUBCASE("X = P_T") {
    const auto t = scalar_tuple({0.5, 1.0});
    const auto r = dilate_n_plus_one(t, scalar(0.5));
    CHECK(r.certificate.value("intertwine_x") <= 1e-8);
  }
  SUBCASE("X = I gives the trivial lift") {
    const auto t = scalar_tuple({0.5, 1.0});
    const auto r = dilate_n_plus_one(t, scalar(1.0));
    CHECK(r.certificate.value("intertwine_x") <= 1e-10);
    // Theta = I: E-factor vanishes
    CHECK(r.e_factor.rows() == 0);
  }
  SUBCASE("matrix member with a polynomial commutant") {
    GenSpec spec;
    spec.seed = 9;
    spec.n = 2;
    spec.dims = {1, 2};
    spec.norm_hi = 0.7;
    const auto t = gen_b20_pair(spec);
    const auto x = gen_commutant(t, spec);
    const auto r = dilate_n_plus_one(t, x);
    CHECK(r.certificate.value("intertwine_x") <= 1e-6);
    for (std::size_t i = 0; i < t.n(); ++i) {
      CHECK(r.certificate.value("intertwine[" + std::to_string(i) + "]") <=
            1e-6);
      CHECK(r.certificate.value("slot_fit[" + std::to_string(i) + "]") <=
            1e-6);
      CHECK(r.certificate.value("v_isometry[" + std::to_string(i) + "]") <=
            1e-10);
    }
  }
  SUBCASE("non-commutant rejected") {
    GenSpec spec;
    spec.seed = 10;
    spec.n = 2;
    spec.dims = {1, 2};
    const auto t = gen_b20_pair(spec);
    ComplexMatrix bad = testsup::commuting_tuple(123, 1, t.dim).ops[0];
    bad(0, t.dim - 1) += cplx(0.4, 0.1);
    bad *= cplx(0.5, 0.0);
    try {
      (void)dilate_n_plus_one(t, bad);
      FAIL("expected NotACommutant");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::not_a_commutant);
    }
  }
}
