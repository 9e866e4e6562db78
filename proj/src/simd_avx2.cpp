// AVX2/FMA variants of the inner kernels. Compiled with -mavx2 -mfma; selected
// at runtime by active_kernels(). The reduction and polynomials mirror the
// scalar reference exactly; only accumulation order differs.
#include "torushu/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <numbers>

namespace torushu::simd {
namespace detail {

namespace {

inline __m256d rint_pd(__m256d x) {
  return _mm256_round_pd(x, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
}

inline void sincos2pi_pd(__m256d a, __m256d& s, __m256d& c) {
  const __m256d x = _mm256_sub_pd(a, rint_pd(a));
  const __m256d q = rint_pd(_mm256_mul_pd(x, _mm256_set1_pd(4.0)));
  const __m256d r = _mm256_fnmadd_pd(q, _mm256_set1_pd(0.25), x);
  const __m256d th = _mm256_mul_pd(r, _mm256_set1_pd(2.0 * std::numbers::pi));
  const __m256d t = _mm256_mul_pd(th, th);

  __m256d ps = _mm256_set1_pd(-1.0 / 1307674368000.0);
  ps = _mm256_fmadd_pd(ps, t, _mm256_set1_pd(1.0 / 6227020800.0));
  ps = _mm256_fmadd_pd(ps, t, _mm256_set1_pd(-1.0 / 39916800.0));
  ps = _mm256_fmadd_pd(ps, t, _mm256_set1_pd(1.0 / 362880.0));
  ps = _mm256_fmadd_pd(ps, t, _mm256_set1_pd(-1.0 / 5040.0));
  ps = _mm256_fmadd_pd(ps, t, _mm256_set1_pd(1.0 / 120.0));
  ps = _mm256_fmadd_pd(ps, t, _mm256_set1_pd(-1.0 / 6.0));
  ps = _mm256_fmadd_pd(ps, t, _mm256_set1_pd(1.0));
  const __m256d s0 = _mm256_mul_pd(th, ps);

  __m256d pc = _mm256_set1_pd(1.0 / 20922789888000.0);
  pc = _mm256_fmadd_pd(pc, t, _mm256_set1_pd(-1.0 / 87178291200.0));
  pc = _mm256_fmadd_pd(pc, t, _mm256_set1_pd(1.0 / 479001600.0));
  pc = _mm256_fmadd_pd(pc, t, _mm256_set1_pd(-1.0 / 3628800.0));
  pc = _mm256_fmadd_pd(pc, t, _mm256_set1_pd(1.0 / 40320.0));
  pc = _mm256_fmadd_pd(pc, t, _mm256_set1_pd(-1.0 / 720.0));
  pc = _mm256_fmadd_pd(pc, t, _mm256_set1_pd(1.0 / 24.0));
  pc = _mm256_fmadd_pd(pc, t, _mm256_set1_pd(-1.0 / 2.0));
  pc = _mm256_fmadd_pd(pc, t, _mm256_set1_pd(1.0));

  const __m256i q64 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(q));
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(q64, one), one));
  const __m256d negs = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(q64, two), two));
  const __m256d negc = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(_mm256_add_epi64(q64, one), two), two));

  const __m256d signbit = _mm256_set1_pd(-0.0);
  const __m256d sv = _mm256_blendv_pd(s0, pc, swap);
  const __m256d cv = _mm256_blendv_pd(pc, s0, swap);
  s = _mm256_xor_pd(sv, _mm256_and_pd(negs, signbit));
  c = _mm256_xor_pd(cv, _mm256_and_pd(negc, signbit));
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline __m256d phase_at(const double* const* coords, int d, const double* m, std::size_t j) {
  __m256d phase = _mm256_mul_pd(_mm256_set1_pd(m[0]), _mm256_loadu_pd(coords[0] + j));
  for (int i = 1; i < d; ++i)
    phase = _mm256_fmadd_pd(_mm256_set1_pd(m[i]), _mm256_loadu_pd(coords[i] + j), phase);
  return phase;
}

SumCS weyl_sum_avx2(const double* const* coords, int d, std::size_t n, const double* m) {
  __m256d accs = _mm256_setzero_pd(), accc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d s, c;
    sincos2pi_pd(phase_at(coords, d, m, j), s, c);
    accs = _mm256_add_pd(accs, s);
    accc = _mm256_add_pd(accc, c);
  }
  SumCS acc{hsum(accc), hsum(accs)};
  for (; j < n; ++j) {
    double phase = phase_dot(coords, d, j, m);
    double s, c;
    sincos2pi(phase, s, c);
    acc.c += c;
    acc.s += s;
  }
  return acc;
}

double weighted_cos_sum_avx2(const double* const* coords, int d, std::size_t n,
                             const double* m, const double* wgt) {
  __m256d acc4 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d s, c;
    sincos2pi_pd(phase_at(coords, d, m, j), s, c);
    acc4 = _mm256_fmadd_pd(_mm256_loadu_pd(wgt + j), c, acc4);
  }
  double acc = hsum(acc4);
  for (; j < n; ++j) {
    double phase = phase_dot(coords, d, j, m);
    double s, c;
    sincos2pi(phase, s, c);
    acc += wgt[j] * c;
  }
  return acc;
}

void sincos_batch_avx2(const double* phase, std::size_t n, double* s, double* c) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d sv, cv;
    sincos2pi_pd(_mm256_loadu_pd(phase + j), sv, cv);
    _mm256_storeu_pd(s + j, sv);
    _mm256_storeu_pd(c + j, cv);
  }
  for (; j < n; ++j) sincos2pi(phase[j], s[j], c[j]);
}

std::size_t count_within_avx2(const double* const* coords, int d, std::size_t n,
                              const double* center, const double* scale, double r2) {
  const __m256d r2v = _mm256_set1_pd(r2);
  std::size_t count = 0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int i = 0; i < d; ++i) {
      __m256d u = _mm256_sub_pd(_mm256_loadu_pd(coords[i] + j), _mm256_set1_pd(center[i]));
      u = _mm256_sub_pd(u, rint_pd(u));
      __m256d y = _mm256_mul_pd(u, _mm256_set1_pd(scale[i]));
      // plain mul+add keeps counts bitwise identical to the scalar kernel
      acc = _mm256_add_pd(acc, _mm256_mul_pd(y, y));
    }
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(acc, r2v, _CMP_LE_OQ));
    count += static_cast<std::size_t>(__builtin_popcount(mask));
  }
  for (; j < n; ++j) {
    double acc = 0;
    for (int i = 0; i < d; ++i) {
      double u = coords[i][j] - center[i];
      u -= std::nearbyint(u);
      double y = u * scale[i];
      acc += y * y;
    }
    count += (acc <= r2);
  }
  return count;
}

}  // namespace

const Kernels* avx2_kernels_impl() {
  static const Kernels k = {"avx2", weyl_sum_avx2, weighted_cos_sum_avx2,
                            sincos_batch_avx2, count_within_avx2};
  return &k;
}

}  // namespace detail
}  // namespace torushu::simd

#endif  // x86_64
