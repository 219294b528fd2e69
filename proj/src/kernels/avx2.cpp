// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "hdgcd/kernels.hpp"

namespace hdgcd::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline double dot3(const double* a, const double* b, const double* w,
                   std::size_t nq) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t q = 0;
  for (; q + 8 <= nq; q += 8) {
    __m256d wa0 = _mm256_mul_pd(_mm256_loadu_pd(w + q), _mm256_loadu_pd(a + q));
    __m256d wa1 =
        _mm256_mul_pd(_mm256_loadu_pd(w + q + 4), _mm256_loadu_pd(a + q + 4));
    acc0 = _mm256_fmadd_pd(wa0, _mm256_loadu_pd(b + q), acc0);
    acc1 = _mm256_fmadd_pd(wa1, _mm256_loadu_pd(b + q + 4), acc1);
  }
  for (; q + 4 <= nq; q += 4) {
    __m256d wa = _mm256_mul_pd(_mm256_loadu_pd(w + q), _mm256_loadu_pd(a + q));
    acc0 = _mm256_fmadd_pd(wa, _mm256_loadu_pd(b + q), acc0);
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; q < nq; ++q) sum += w[q] * a[q] * b[q];
  return sum;
}

}  // namespace

void accumulate_weighted_products(const double* a, std::size_t m,
                                  const double* b, std::size_t n,
                                  const double* w, std::size_t nq,
                                  double* out) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out[i * n + j] += dot3(a + i * nq, b + j * nq, w, nq);
}

double weighted_dot(const double* a, const double* b, const double* w,
                    std::size_t nq) {
  return dot3(a, b, w, nq);
}

double weighted_sum_squares(const double* d, const double* w, std::size_t nq) {
  return dot3(d, d, w, nq);
}

}  // namespace hdgcd::kernels::avx2
