#include "dilatrix/kernels.hpp"

#include <cstdlib>
#include <mutex>
#include <string>

#include "dilatrix/types.hpp"

namespace dilatrix::kern {

namespace detail {

void gemm_acc_scalar(const cplx* a, const cplx* b, cplx* c, std::size_t m,
                     std::size_t k, std::size_t n) {
  // Row-of-B saxpy order: streams b and c rows, a is broadcast.
  for (std::size_t i = 0; i < m; ++i) {
    cplx* ci = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const cplx aip = a[i * k + p];
      if (aip == cplx(0.0, 0.0)) continue;
      const cplx* bp = b + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double norm_sq_scalar(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
  return s;
}

#if defined(DILATRIX_HAVE_AVX2_TU)
void gemm_acc_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t m,
                   std::size_t k, std::size_t n);
void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n);
double norm_sq_avx2(const cplx* x, std::size_t n);
#endif

#if defined(DILATRIX_HAVE_NEON_TU)
void gemm_acc_neon(const cplx* a, const cplx* b, cplx* c, std::size_t m,
                   std::size_t k, std::size_t n);
void axpy_neon(cplx alpha, const cplx* x, cplx* y, std::size_t n);
double norm_sq_neon(const cplx* x, std::size_t n);
#endif

}  // namespace detail

namespace {

struct Table {
  void (*gemm)(const cplx*, const cplx*, cplx*, std::size_t, std::size_t,
               std::size_t);
  void (*axpy)(cplx, const cplx*, cplx*, std::size_t);
  double (*norm_sq)(const cplx*, std::size_t);
  Backend backend;
};

Table make_table(Backend b) {
  switch (b) {
#if defined(DILATRIX_HAVE_AVX2_TU)
    case Backend::avx2:
      return {detail::gemm_acc_avx2, detail::axpy_avx2, detail::norm_sq_avx2,
              Backend::avx2};
#endif
#if defined(DILATRIX_HAVE_NEON_TU)
    case Backend::neon:
      return {detail::gemm_acc_neon, detail::axpy_neon, detail::norm_sq_neon,
              Backend::neon};
#endif
    default:
      return {detail::gemm_acc_scalar, detail::axpy_scalar,
              detail::norm_sq_scalar, Backend::scalar};
  }
}

Backend detect() {
#if defined(DILATRIX_HAVE_AVX2_TU)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Backend::avx2;
#endif
#if defined(DILATRIX_HAVE_NEON_TU)
  return Backend::neon;
#endif
  return Backend::scalar;
}

Table g_table;  // guarded by g_once / force()
std::once_flag g_once;

void init_table() {
  Backend b = detect();
  if (const char* env = std::getenv("DILATRIX_SIMD")) {
    std::string s(env);
    if (s == "scalar")
      b = Backend::scalar;
    else if (s == "avx2" && available(Backend::avx2))
      b = Backend::avx2;
    else if (s == "neon" && available(Backend::neon))
      b = Backend::neon;
  }
  g_table = make_table(b);
}

const Table& table() {
  std::call_once(g_once, init_table);
  return g_table;
}

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "?";
}

bool available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(DILATRIX_HAVE_AVX2_TU)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if defined(DILATRIX_HAVE_NEON_TU)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend active() { return table().backend; }

void force(Backend b) {
  require(available(b), ErrorCode::invalid_argument,
          std::string("SIMD backend not available: ") + backend_name(b));
  std::call_once(g_once, init_table);
  g_table = make_table(b);
}

void gemm_acc(const cplx* a, const cplx* b, cplx* c, std::size_t m,
              std::size_t k, std::size_t n) {
  if (m == 0 || n == 0 || k == 0) return;
  table().gemm(a, b, c, m, k, n);
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  if (n == 0) return;
  table().axpy(alpha, x, y, n);
}

double norm_sq(const cplx* x, std::size_t n) {
  if (n == 0) return 0.0;
  return table().norm_sq(x, n);
}

}  // namespace dilatrix::kern
