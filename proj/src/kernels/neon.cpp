#include <arm_neon.h>

#include "hdgcd/kernels.hpp"

namespace hdgcd::kernels::neon {
namespace {

inline double dot3(const double* a, const double* b, const double* w,
                   std::size_t nq) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t q = 0;
  for (; q + 4 <= nq; q += 4) {
    float64x2_t wa0 = vmulq_f64(vld1q_f64(w + q), vld1q_f64(a + q));
    float64x2_t wa1 = vmulq_f64(vld1q_f64(w + q + 2), vld1q_f64(a + q + 2));
    acc0 = vfmaq_f64(acc0, wa0, vld1q_f64(b + q));
    acc1 = vfmaq_f64(acc1, wa1, vld1q_f64(b + q + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
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

}  // namespace hdgcd::kernels::neon
