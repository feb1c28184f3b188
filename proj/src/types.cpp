#include "dilatrix/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "dilatrix/kernels.hpp"

namespace dilatrix {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::shape_mismatch: return "ShapeMismatch";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::not_a_contraction: return "NotAContraction";
    case ErrorCode::not_commuting: return "NotCommuting";
    case ErrorCode::not_in_class: return "NotInClass";
    case ErrorCode::not_a_commutant: return "NotACommutant";
    case ErrorCode::not_unitary: return "NotUnitary";
    case ErrorCode::not_block_diagonal: return "NotBlockDiagonal";
    case ErrorCode::truncation_insufficient: return "TruncationInsufficient";
    case ErrorCode::degenerate_subspace: return "DegenerateSubspace";
    case ErrorCode::genericity_failure: return "GenericityFailure";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::relation_residual_exceeded: return "RelationResidualExceeded";
    case ErrorCode::subspace_growth_diverged: return "SubspaceGrowthDiverged";
    case ErrorCode::numeric_failure: return "NumericFailure";
  }
  return "Unknown";
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<cplx>& d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      m(j, i) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix ComplexMatrix::block(std::size_t i0, std::size_t j0,
                                   std::size_t r, std::size_t c) const {
  require(i0 + r <= rows_ && j0 + c <= cols_, ErrorCode::shape_mismatch,
          "block out of range");
  ComplexMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    std::memcpy(m.row(i), row(i0 + i) + j0, c * sizeof(cplx));
  return m;
}

void ComplexMatrix::set_block(std::size_t i0, std::size_t j0,
                              const ComplexMatrix& m) {
  require(i0 + m.rows() <= rows_ && j0 + m.cols() <= cols_,
          ErrorCode::shape_mismatch, "set_block out of range");
  for (std::size_t i = 0; i < m.rows(); ++i)
    std::memcpy(row(i0 + i) + j0, m.row(i), m.cols() * sizeof(cplx));
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require(rows_ == rhs.rows_ && cols_ == rhs.cols_, ErrorCode::shape_mismatch,
          "matrix addition shape mismatch");
  kern::axpy(cplx(1.0, 0.0), rhs.a_.data(), a_.data(), a_.size());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require(rows_ == rhs.rows_ && cols_ == rhs.cols_, ErrorCode::shape_mismatch,
          "matrix subtraction shape mismatch");
  kern::axpy(cplx(-1.0, 0.0), rhs.a_.data(), a_.data(), a_.size());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& v : a_) v *= s;
  return *this;
}

double ComplexMatrix::frobenius_norm() const {
  return std::sqrt(kern::norm_sq(a_.data(), a_.size()));
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : a_) m = std::max(m, std::abs(v));
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const auto& v : a_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols() == b.rows(), ErrorCode::shape_mismatch,
          "matrix product shape mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  kern::gemm_acc(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

void multiply_acc(const ComplexMatrix& a, const ComplexMatrix& b,
                  ComplexMatrix& c) {
  require(a.cols() == b.rows() && c.rows() == a.rows() && c.cols() == b.cols(),
          ErrorCode::shape_mismatch, "multiply_acc shape mismatch");
  kern::gemm_acc(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
}

ComplexMatrix vstack(const std::vector<ComplexMatrix>& parts) {
  std::size_t rows = 0, cols = 0;
  for (const auto& p : parts) {
    rows += p.rows();
    if (p.rows() > 0) cols = std::max(cols, p.cols());
  }
  ComplexMatrix m(rows, cols);
  std::size_t at = 0;
  for (const auto& p : parts) {
    if (p.rows() == 0) continue;
    require(p.cols() == cols, ErrorCode::shape_mismatch,
            "vstack column mismatch");
    m.set_block(at, 0, p);
    at += p.rows();
  }
  return m;
}

ComplexMatrix direct_sum(const std::vector<ComplexMatrix>& blocks) {
  std::size_t rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  ComplexMatrix m(rows, cols);
  std::size_t i = 0, j = 0;
  for (const auto& b : blocks) {
    m.set_block(i, j, b);
    i += b.rows();
    j += b.cols();
  }
  return m;
}

void Certificate::merge(const Certificate& other, const std::string& prefix) {
  for (const auto& e : other.entries_)
    entries_.push_back({prefix.empty() ? e.name : prefix + "." + e.name,
                        e.value, e.tolerance, e.pass});
}

bool Certificate::passed() const {
  for (const auto& e : entries_)
    if (!e.pass) return false;
  return true;
}

double Certificate::value(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return e.value;
  throw Error(ErrorCode::invalid_argument, "no certificate entry: " + name);
}

bool Certificate::has(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return true;
  return false;
}

std::string Certificate::first_failed() const {
  for (const auto& e : entries_)
    if (!e.pass) return e.name;
  return "";
}

}  // namespace dilatrix
