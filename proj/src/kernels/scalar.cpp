#include "hdgcd/kernels.hpp"

namespace hdgcd::kernels::scalar {

void accumulate_weighted_products(const double* a, std::size_t m,
                                  const double* b, std::size_t n,
                                  const double* w, std::size_t nq,
                                  double* out) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * nq;
    for (std::size_t j = 0; j < n; ++j) {
      const double* bj = b + j * nq;
      double sum = 0.0;
      for (std::size_t q = 0; q < nq; ++q) sum += w[q] * ai[q] * bj[q];
      out[i * n + j] += sum;
    }
  }
}

double weighted_dot(const double* a, const double* b, const double* w,
                    std::size_t nq) {
  double sum = 0.0;
  for (std::size_t q = 0; q < nq; ++q) sum += w[q] * a[q] * b[q];
  return sum;
}

double weighted_sum_squares(const double* d, const double* w, std::size_t nq) {
  double sum = 0.0;
  for (std::size_t q = 0; q < nq; ++q) sum += w[q] * d[q] * d[q];
  return sum;
}

}  // namespace hdgcd::kernels::scalar
