// AVX2/FMA variants of the complex kernels. Compiled with -mavx2 -mfma and
// entered only after the runtime dispatch has confirmed CPU support.

#include <immintrin.h>

#include <complex>
#include <cstddef>

namespace dilatrix::kern::detail {

using cplx = std::complex<double>;

namespace {

// c += a*b for two packed complex doubles per lane pair:
//   t  = [ai*bi, ai*br]       (from swapped b)
//   c += fmaddsub(ar, b, t) = [ar*br - ai*bi, ar*bi + ai*br]
inline __m256d cmul_acc(__m256d acc, __m256d ar, __m256d ai, __m256d b) {
  __m256d bswap = _mm256_permute_pd(b, 0x5);
  __m256d t = _mm256_mul_pd(ai, bswap);
  return _mm256_add_pd(acc, _mm256_fmaddsub_pd(ar, b, t));
}

}  // namespace

void gemm_acc_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t m,
                   std::size_t k, std::size_t n) {
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  const std::size_t n2 = (n / 2) * 2;
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = cd + 2 * i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const cplx aip = a[i * k + p];
      if (aip == cplx(0.0, 0.0)) continue;
      const __m256d ar = _mm256_set1_pd(aip.real());
      const __m256d ai = _mm256_set1_pd(aip.imag());
      const double* bp = bd + 2 * p * n;
      std::size_t j = 0;
      for (; j < n2; j += 2) {
        __m256d bv = _mm256_loadu_pd(bp + 2 * j);
        __m256d cv = _mm256_loadu_pd(ci + 2 * j);
        cv = cmul_acc(cv, ar, ai, bv);
        _mm256_storeu_pd(ci + 2 * j, cv);
      }
      if (j < n) {
        // odd tail: one complex entry
        const cplx prod = aip * b[p * n + j];
        c[i * n + j] += prod;
      }
    }
  }
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const std::size_t n2 = (n / 2) * 2;
  std::size_t j = 0;
  for (; j < n2; j += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * j);
    __m256d yv = _mm256_loadu_pd(yd + 2 * j);
    yv = cmul_acc(yv, ar, ai, xv);
    _mm256_storeu_pd(yd + 2 * j, yv);
  }
  if (j < n) y[j] += alpha * x[j];
}

double norm_sq_avx2(const cplx* x, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n2 = (n / 2) * 2;
  std::size_t j = 0;
  for (; j < n2; j += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * j);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  if (j < n) s += std::norm(x[j]);
  return s;
}

}  // namespace dilatrix::kern::detail
