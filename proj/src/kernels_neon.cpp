// NEON variants (one complex double per 128-bit register). Only built on
// aarch64/ARM targets.

#include <arm_neon.h>

#include <complex>
#include <cstddef>

namespace dilatrix::kern::detail {

using cplx = std::complex<double>;

namespace {

// acc += (ar + i*ai) * b with b = [br, bi]:
//   acc += ar*[br,bi] + ai*[-bi,br]
inline float64x2_t cmul_acc(float64x2_t acc, float64x2_t ar, float64x2_t ai_s,
                            float64x2_t b) {
  float64x2_t bswap = vextq_f64(b, b, 1);
  acc = vfmaq_f64(acc, ar, b);
  return vfmaq_f64(acc, ai_s, bswap);
}

const float64x2_t k_sign = {-1.0, 1.0};

}  // namespace

void gemm_acc_neon(const cplx* a, const cplx* b, cplx* c, std::size_t m,
                   std::size_t k, std::size_t n) {
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = cd + 2 * i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const cplx aip = a[i * k + p];
      if (aip == cplx(0.0, 0.0)) continue;
      const float64x2_t ar = vdupq_n_f64(aip.real());
      const float64x2_t ai_s = vmulq_f64(vdupq_n_f64(aip.imag()), k_sign);
      const double* bp = bd + 2 * p * n;
      for (std::size_t j = 0; j < n; ++j) {
        float64x2_t bv = vld1q_f64(bp + 2 * j);
        float64x2_t cv = vld1q_f64(ci + 2 * j);
        vst1q_f64(ci + 2 * j, cmul_acc(cv, ar, ai_s, bv));
      }
    }
  }
}

void axpy_neon(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const float64x2_t ar = vdupq_n_f64(alpha.real());
  const float64x2_t ai_s = vmulq_f64(vdupq_n_f64(alpha.imag()), k_sign);
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  for (std::size_t j = 0; j < n; ++j) {
    float64x2_t xv = vld1q_f64(xd + 2 * j);
    float64x2_t yv = vld1q_f64(yd + 2 * j);
    vst1q_f64(yd + 2 * j, cmul_acc(yv, ar, ai_s, xv));
  }
}

double norm_sq_neon(const cplx* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  const double* xd = reinterpret_cast<const double*>(x);
  for (std::size_t j = 0; j < n; ++j) {
    float64x2_t xv = vld1q_f64(xd + 2 * j);
    acc = vfmaq_f64(acc, xv, xv);
  }
  return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
}

}  // namespace dilatrix::kern::detail
