#pragma once

#include <complex>
#include <cstddef>

namespace dilatrix::kern {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2, neon };

const char* backend_name(Backend b);

/// Backend in effect for subsequent kernel calls. Resolved on first use from
/// CPU capabilities, overridable via DILATRIX_SIMD=scalar|avx2|neon.
Backend active();

/// Force a backend (tests). Throws Error(invalid_argument) if the requested
/// backend is not available on this machine.
void force(Backend b);

bool available(Backend b);

/// C += A * B with A m-by-k, B k-by-n, C m-by-n, all row-major complex.
void gemm_acc(const cplx* a, const cplx* b, cplx* c, std::size_t m,
              std::size_t k, std::size_t n);

/// y += alpha * x
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);

/// sum of |x_i|^2
double norm_sq(const cplx* x, std::size_t n);

}  // namespace dilatrix::kern
