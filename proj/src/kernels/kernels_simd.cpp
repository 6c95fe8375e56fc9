#include "revq/kernels.hpp"

#include <algorithm>

// Complex arithmetic on interleaved (re,im) pairs. A 256-bit AVX2 lane holds
// two complex doubles; (ar,ai)*(br,bi) is computed with the usual
// broadcast/swap/addsub pattern. The NEON path processes one complex per
// 128-bit lane with fused multiplies.

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace revq::kern {
namespace {

__attribute__((target("avx2,fma"))) inline __m256d cmul2(__m256d re, __m256d im, __m256d b) {
  // re = broadcast real parts of a, im = broadcast imag parts of a
  __m256d t1 = _mm256_mul_pd(re, b);                     // (ar*br, ar*bi) x2
  __m256d bs = _mm256_permute_pd(b, 0b0101);             // (bi, br) x2
  __m256d t2 = _mm256_mul_pd(im, bs);                    // (ai*bi, ai*br) x2
  return _mm256_addsub_pd(t1, t2);                       // (ar*br-ai*bi, ar*bi+ai*br)
}

__attribute__((target("avx2,fma"))) void axpy_avx2(std::size_t n, cd alpha, const cd* x, cd* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  __m256d re = _mm256_set1_pd(alpha.real());
  __m256d im = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul2(re, im, xv)));
  }
  for (; i < n; i++) y[i] += alpha * x[i];
}

__attribute__((target("avx2,fma"))) void scal_copy_avx2(std::size_t n, cd alpha, const cd* x,
                                                        cd* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  __m256d re = _mm256_set1_pd(alpha.real());
  __m256d im = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, cmul2(re, im, xv));
  }
  for (; i < n; i++) y[i] = alpha * x[i];
}

__attribute__((target("avx2,fma"))) void gemm_avx2(int m, int n, int k, const cd* A, const cd* B,
                                                   cd* C) {
  std::fill_n(C, static_cast<std::size_t>(m) * n, cd(0, 0));
  for (int i = 0; i < m; i++)
    for (int kk = 0; kk < k; kk++) {
      cd a = A[static_cast<std::size_t>(i) * k + kk];
      if (a == cd(0, 0)) continue;
      axpy_avx2(static_cast<std::size_t>(n), a, B + static_cast<std::size_t>(kk) * n,
                C + static_cast<std::size_t>(i) * n);
    }
}

}  // namespace

const Impl* simd_impl_probe() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    static Impl impl{"avx2", axpy_avx2, scal_copy_avx2, gemm_avx2};
    return &impl;
  }
  return nullptr;
}

}  // namespace revq::kern

#elif defined(__aarch64__)
#include <arm_neon.h>

namespace revq::kern {
namespace {

inline float64x2_t cmul1(float64x2_t a, float64x2_t b) {
  // a = (ar, ai), b = (br, bi)
  float64x2_t re = vdupq_laneq_f64(a, 0);               // (ar, ar)
  float64x2_t im = vdupq_laneq_f64(a, 1);               // (ai, ai)
  float64x2_t bs = vextq_f64(b, b, 1);                  // (bi, br)
  float64x2_t t = vmulq_f64(im, bs);                    // (ai*bi, ai*br)
  t = vsetq_lane_f64(-vgetq_lane_f64(t, 0), t, 0);      // (-ai*bi, ai*br)
  return vfmaq_f64(t, re, b);                           // (ar*br-ai*bi, ar*bi+ai*br)
}

void axpy_neon(std::size_t n, cd alpha, const cd* x, cd* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  float64x2_t av = vld1q_f64(reinterpret_cast<const double*>(&alpha));
  for (std::size_t i = 0; i < n; i++) {
    float64x2_t xv = vld1q_f64(xd + 2 * i);
    float64x2_t yv = vld1q_f64(yd + 2 * i);
    vst1q_f64(yd + 2 * i, vaddq_f64(yv, cmul1(av, xv)));
  }
}

void scal_copy_neon(std::size_t n, cd alpha, const cd* x, cd* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  float64x2_t av = vld1q_f64(reinterpret_cast<const double*>(&alpha));
  for (std::size_t i = 0; i < n; i++) {
    float64x2_t xv = vld1q_f64(xd + 2 * i);
    vst1q_f64(yd + 2 * i, cmul1(av, xv));
  }
}

void gemm_neon(int m, int n, int k, const cd* A, const cd* B, cd* C) {
  std::fill_n(C, static_cast<std::size_t>(m) * n, cd(0, 0));
  for (int i = 0; i < m; i++)
    for (int kk = 0; kk < k; kk++) {
      cd a = A[static_cast<std::size_t>(i) * k + kk];
      if (a == cd(0, 0)) continue;
      axpy_neon(static_cast<std::size_t>(n), a, B + static_cast<std::size_t>(kk) * n,
                C + static_cast<std::size_t>(i) * n);
    }
}

}  // namespace

const Impl* simd_impl_probe() {
  static Impl impl{"neon", axpy_neon, scal_copy_neon, gemm_neon};
  return &impl;
}

}  // namespace revq::kern

#else

namespace revq::kern {
const Impl* simd_impl_probe() { return nullptr; }
}  // namespace revq::kern

#endif
