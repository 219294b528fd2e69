#pragma once
// Dense inner-loop kernels used by element assembly and error integration.
//
// Every kernel has a scalar reference implementation. SIMD variants (AVX2+FMA
// on x86-64, NEON on aarch64) are compiled when the target supports them and
// selected once at runtime. Set HDGCD_SIMD=scalar in the environment to pin
// the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace hdgcd::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

/// ISA of the kernels currently dispatched to.
Isa active_isa();

/// Best ISA the running CPU supports among those compiled in.
Isa detected_isa();

/// Override the dispatch target. Throws std::invalid_argument when the
/// requested ISA is not available on this build or CPU.
void force_isa(Isa isa);

bool isa_available(Isa isa);

// out(i, j) += sum_q w[q] * a(i, q) * b(j, q)
// a is m x nq, b is n x nq, out is m x n, all row-major.
void accumulate_weighted_products(std::span<const double> a, std::size_t m,
                                  std::span<const double> b, std::size_t n,
                                  std::span<const double> w,
                                  std::span<double> out);

// sum_q w[q] * a[q] * b[q]
double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w);

// sum_q w[q] * d[q]^2
double weighted_sum_squares(std::span<const double> d,
                            std::span<const double> w);

#define HDGCD_KERNEL_DECLS                                                     \
  void accumulate_weighted_products(const double* a, std::size_t m,            \
                                    const double* b, std::size_t n,            \
                                    const double* w, std::size_t nq,           \
                                    double* out);                              \
  double weighted_dot(const double* a, const double* b, const double* w,       \
                      std::size_t nq);                                         \
  double weighted_sum_squares(const double* d, const double* w,                \
                              std::size_t nq);

namespace scalar {
HDGCD_KERNEL_DECLS
}
namespace avx2 {
HDGCD_KERNEL_DECLS
}
namespace neon {
HDGCD_KERNEL_DECLS
}

#undef HDGCD_KERNEL_DECLS

}  // namespace hdgcd::kernels
