#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dilatrix {

using cplx = std::complex<double>;

/// Error taxonomy shared by the whole pipeline. Every mathematically
/// meaningful rejection maps to one of these codes.
enum class ErrorCode {
  shape_mismatch,
  invalid_argument,
  parse_error,
  not_a_contraction,
  not_commuting,
  not_in_class,
  not_a_commutant,
  not_unitary,
  not_block_diagonal,
  truncation_insufficient,
  degenerate_subspace,
  genericity_failure,
  no_convergence,
  relation_residual_exceeded,
  subspace_growth_diverged,
  numeric_failure,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Dense row-major complex matrix. The universal carrier for every operator
/// in the toolkit; all sizes here are desk-scale so value semantics are fine.
class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, cplx(0.0, 0.0)) {}

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
  }
  static ComplexMatrix diagonal(const std::vector<cplx>& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  bool is_square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }
  cplx* row(std::size_t i) { return a_.data() + i * cols_; }
  const cplx* row(std::size_t i) const { return a_.data() + i * cols_; }

  ComplexMatrix adjoint() const;

  ComplexMatrix block(std::size_t i0, std::size_t j0, std::size_t r,
                      std::size_t c) const;
  void set_block(std::size_t i0, std::size_t j0, const ComplexMatrix& m);

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx s);

  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs -= rhs;
    return lhs;
  }
  friend ComplexMatrix operator*(ComplexMatrix lhs, cplx s) {
    lhs *= s;
    return lhs;
  }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix rhs) {
    rhs *= s;
    return rhs;
  }
  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<cplx> a_;
};

/// C = A*B, kernel-backed. Throws ShapeMismatch on inner-size disagreement.
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// C += A*B without an intermediate allocation.
void multiply_acc(const ComplexMatrix& a, const ComplexMatrix& b,
                  ComplexMatrix& c);

/// Stack matrices with equal column counts on top of each other.
ComplexMatrix vstack(const std::vector<ComplexMatrix>& parts);

/// Block-diagonal direct sum; empty blocks contribute nothing.
ComplexMatrix direct_sum(const std::vector<ComplexMatrix>& blocks);

/// Residual report emitted by every verification operation: named residual
/// magnitudes against their tolerances.
class Certificate {
 public:
  struct Entry {
    std::string name;
    double value;
    double tolerance;
    bool pass;
  };

  void add(const std::string& name, double value, double tolerance) {
    entries_.push_back({name, value, tolerance, value <= tolerance});
  }
  void add_info(const std::string& name, double value) {
    entries_.push_back({name, value, 0.0, true});
  }
  void merge(const Certificate& other, const std::string& prefix = "");

  bool passed() const;
  double value(const std::string& name) const;
  bool has(const std::string& name) const;
  std::string first_failed() const;

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace dilatrix
