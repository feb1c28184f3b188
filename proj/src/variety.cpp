#include "dilatrix/variety.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "dilatrix/dilation.hpp"
#include "dilatrix/linalg.hpp"
#include "dilatrix/threading.hpp"

namespace dilatrix {

namespace {

constexpr double kClusterTol = 1e-7;

double inf_dist(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Greedy multiset matching; adequate at cluster tolerance scale.
double matching_distance(std::vector<std::vector<cplx>> a,
                         const std::vector<std::vector<cplx>>& b) {
  double worst = 0.0;
  std::vector<bool> used(a.size(), false);
  for (const auto& p : b) {
    double best = 1e300;
    std::size_t best_t = a.size();
    for (std::size_t t = 0; t < a.size(); ++t) {
      if (used[t]) continue;
      const double d = inf_dist(p, a[t]);
      if (d < best) {
        best = d;
        best_t = t;
      }
    }
    if (best_t == a.size()) return 1e300;
    used[best_t] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<std::vector<cplx>> extract_points(
    const std::vector<ComplexMatrix>& mats, std::uint64_t seed,
    double* lower_residual) {
  const std::size_t n = mats.size();
  const std::size_t d = mats[0].rows();
  std::mt19937_64 rng(seed);
  auto unit = [&rng]() {
    // uniform double in [0,1) from the top 53 bits
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  ComplexMatrix combo(d, d);
  for (std::size_t i = 0; i < n; ++i) {
    const double th = 2.0 * std::numbers::pi * unit();
    const double mag = 0.5 + unit();
    const cplx c = cplx(mag * std::cos(th), mag * std::sin(th));
    ComplexMatrix scaled = mats[i];
    scaled *= c;
    combo += scaled;
  }
  const linalg::Schur sc = linalg::schur(combo);

  double low = 0.0;
  std::vector<std::vector<cplx>> points(d, std::vector<cplx>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexMatrix tri = sc.q.adjoint() * mats[i] * sc.q;
    for (std::size_t k = 0; k < d; ++k) points[k][i] = tri(k, k);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < r; ++c)
        low = std::max(low, std::abs(tri(r, c)));
  }
  if (lower_residual) *lower_residual = low;
  return points;
}

void cluster_points(std::vector<std::vector<cplx>>& pts) {
  // Merge points within the cluster tolerance to a common representative.
  const std::size_t d = pts.size();
  std::vector<std::size_t> owner(d);
  for (std::size_t i = 0; i < d; ++i) owner[i] = i;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (owner[k] == k && inf_dist(pts[i], pts[k]) <= kClusterTol) {
        owner[i] = k;
        break;
      }
  for (std::size_t rep = 0; rep < d; ++rep) {
    if (owner[rep] != rep) continue;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < d; ++i)
      if (owner[i] == rep) members.push_back(i);
    if (members.size() < 2) continue;
    std::vector<cplx> centroid(pts[rep].size(), cplx(0.0, 0.0));
    for (std::size_t m : members)
      for (std::size_t c = 0; c < centroid.size(); ++c)
        centroid[c] += pts[m][c];
    for (auto& v : centroid) v /= static_cast<double>(members.size());
    for (std::size_t m : members) pts[m] = centroid;
  }
}

}  // namespace

JointSpectrumResult joint_spectrum(const std::vector<ComplexMatrix>& mats,
                                   double tol, std::uint64_t seed) {
  require(!mats.empty(), ErrorCode::invalid_argument, "joint_spectrum: empty");
  const std::size_t d = mats[0].rows();
  for (const auto& m : mats)
    require(m.is_square() && m.rows() == d, ErrorCode::shape_mismatch,
            "joint_spectrum: sizes differ");

  std::vector<double> norms;
  norms.reserve(mats.size());
  for (const auto& m : mats) norms.push_back(linalg::op_norm(m));
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::size_t k = i + 1; k < mats.size(); ++k) {
      const double scale = std::max(1.0, norms[i] * norms[k]);
      const double r =
          linalg::op_norm(mats[i] * mats[k] - mats[k] * mats[i]) / scale;
      require(r <= tol, ErrorCode::not_commuting,
              "joint_spectrum: commutator residual " + std::to_string(r));
    }

  // Two independent generic combinations must agree as point multisets;
  // retry with fresh draws on disagreement.
  std::vector<std::vector<cplx>> pts;
  bool ok = false;
  for (std::size_t attempt = 0; attempt < 5 && !ok; ++attempt) {
    double low1 = 0.0, low2 = 0.0;
    auto p1 = extract_points(mats, seed + 2 * attempt, &low1);
    auto p2 = extract_points(mats, seed + 2 * attempt + 1, &low2);
    cluster_points(p1);
    cluster_points(p2);
    if (matching_distance(p1, p2) <= kClusterTol * 10) {
      pts = p1;
      ok = true;
    }
  }
  require(ok, ErrorCode::genericity_failure,
          "joint_spectrum: generic combinations kept disagreeing");

  JointSpectrumResult out;
  out.points = pts;
  out.residuals.resize(d);
  for (std::size_t k = 0; k < d; ++k) {
    ComplexMatrix stacked(mats.size() * d, d);
    for (std::size_t i = 0; i < mats.size(); ++i) {
      ComplexMatrix shifted = mats[i];
      for (std::size_t r = 0; r < d; ++r) shifted(r, r) -= pts[k][i];
      stacked.set_block(i * d, 0, shifted);
    }
    out.residuals[k] = linalg::smallest_singular_value(stacked);
    require(out.residuals[k] <= std::max(tol, 1e-7),
            ErrorCode::genericity_failure,
            "joint_spectrum: point failed eigenvector certification (" +
                std::to_string(out.residuals[k]) + ")");
  }
  return out;
}

std::vector<std::vector<cplx>> variety_points(const BclTriple& triple,
                                              std::size_t grid) {
  require(grid >= 1, ErrorCode::invalid_argument, "variety_points: grid");
  const std::size_t n = triple.n();
  std::vector<std::vector<std::vector<cplx>>> per_grid(grid);

  parallel_for(grid, [&](std::size_t t) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(t) / grid;
    const cplx z(std::cos(th), std::sin(th));
    std::vector<ComplexMatrix> phis;
    phis.reserve(n);
    for (std::size_t i = 0; i < n; ++i) phis.push_back(phi_eval(triple, i, z));
    const JointSpectrumResult js = joint_spectrum(phis);
    for (const auto& p : js.points) {
      cplx prod(1.0, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        require(std::abs(std::abs(p[i]) - 1.0) <= 1e-10,
                ErrorCode::numeric_failure,
                "variety_points: non-unimodular coordinate");
        prod *= p[i];
      }
      require(std::abs(prod - z) <= 1e-10, ErrorCode::numeric_failure,
              "variety_points: coordinate product mismatch");
    }
    per_grid[t] = js.points;
  });

  std::vector<std::vector<cplx>> out;
  for (auto& pts : per_grid)
    for (auto& p : pts) out.push_back(std::move(p));
  return out;
}

unsigned Polynomial::total_degree() const {
  unsigned deg = 0;
  for (const auto& [alpha, c] : coeffs) {
    unsigned d = 0;
    for (unsigned a : alpha) d += a;
    deg = std::max(deg, d);
  }
  return deg;
}

cplx Polynomial::eval(const std::vector<cplx>& z) const {
  cplx acc(0.0, 0.0);
  for (const auto& [alpha, c] : coeffs) {
    cplx term = c;
    for (std::size_t i = 0; i < alpha.size() && i < z.size(); ++i)
      for (unsigned p = 0; p < alpha[i]; ++p) term *= z[i];
    acc += term;
  }
  return acc;
}

ComplexMatrix poly_eval_matrix(const Polynomial& p,
                               const ContractionTuple& tuple) {
  require(p.nvars == tuple.n(), ErrorCode::shape_mismatch,
          "poly_eval_matrix: variable count mismatch");
  require(p.total_degree() <= 16, ErrorCode::invalid_argument,
          "poly_eval_matrix: total degree above 16");

  // Cached powers per variable.
  std::vector<std::vector<ComplexMatrix>> powers(tuple.n());
  for (std::size_t i = 0; i < tuple.n(); ++i)
    powers[i].push_back(ComplexMatrix::identity(tuple.dim));

  ComplexMatrix acc(tuple.dim, tuple.dim);
  for (const auto& [alpha, c] : p.coeffs) {
    require(alpha.size() == p.nvars, ErrorCode::invalid_argument,
            "poly_eval_matrix: multi-index arity");
    ComplexMatrix term = ComplexMatrix::identity(tuple.dim);
    for (std::size_t i = 0; i < p.nvars; ++i) {
      while (powers[i].size() <= alpha[i])
        powers[i].push_back(powers[i].back() * tuple.ops[i]);
      if (alpha[i] > 0) term = term * powers[i][alpha[i]];
    }
    term *= c;
    acc += term;
  }
  return acc;
}

VnCertificate vn_check(const ContractionTuple& tuple, const Polynomial& p,
                       std::size_t grid, double tol) {
  require(grid >= 1, ErrorCode::invalid_argument, "vn_check: grid must be >=1");
  require(p.nvars == tuple.n(), ErrorCode::shape_mismatch,
          "vn_check: polynomial arity");

  VnCertificate cert;
  cert.grid_size = grid;
  cert.tolerance = tol;
  cert.lhs = linalg::op_norm(poly_eval_matrix(p, tuple));

  const BclFromTuple bcl = build_bcl_from_tuple(tuple);
  const auto pts = variety_points(bcl.triple, grid);
  double rhs = 0.0;
  for (const auto& z : pts) rhs = std::max(rhs, std::abs(p.eval(z)));
  cert.rhs = rhs;

  // Classical bound over the full torus, sampled on a product grid whose
  // candidate set also contains the variety points (a subset of the torus).
  const std::size_t n = tuple.n();
  std::size_t axis = grid;
  if (n == 3) axis = std::min<std::size_t>(grid, 41);
  if (n >= 4) axis = std::min<std::size_t>(grid, 17);
  double torus = rhs;
  std::vector<std::size_t> index(n, 0);
  std::vector<cplx> z(n);
  const std::size_t total = static_cast<std::size_t>(
      std::pow(static_cast<double>(axis), static_cast<double>(n)));
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t i = 0; i < n; ++i) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(rem % axis) / axis;
      z[i] = cplx(std::cos(th), std::sin(th));
      rem /= axis;
    }
    torus = std::max(torus, std::abs(p.eval(z)));
  }
  cert.rhs_torus = torus;

  cert.margin = cert.rhs - cert.lhs;
  cert.pass = cert.lhs <= cert.rhs + tol;
  return cert;
}

}  // namespace dilatrix
