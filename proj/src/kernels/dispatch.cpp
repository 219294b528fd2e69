#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "hdgcd/kernels.hpp"

namespace hdgcd::kernels {
namespace {

struct Table {
  void (*products)(const double*, std::size_t, const double*, std::size_t,
                   const double*, std::size_t, double*);
  double (*dot)(const double*, const double*, const double*, std::size_t);
  double (*sum_squares)(const double*, const double*, std::size_t);
};

constexpr Table kScalar{scalar::accumulate_weighted_products,
                        scalar::weighted_dot, scalar::weighted_sum_squares};
#if defined(HDGCD_HAVE_AVX2)
constexpr Table kAvx2{avx2::accumulate_weighted_products, avx2::weighted_dot,
                      avx2::weighted_sum_squares};
#endif
#if defined(HDGCD_HAVE_NEON)
constexpr Table kNeon{neon::accumulate_weighted_products, neon::weighted_dot,
                      neon::weighted_sum_squares};
#endif

const Table& table_for(Isa isa) {
  switch (isa) {
#if defined(HDGCD_HAVE_AVX2)
    case Isa::Avx2:
      return kAvx2;
#endif
#if defined(HDGCD_HAVE_NEON)
    case Isa::Neon:
      return kNeon;
#endif
    default:
      return kScalar;
  }
}

Isa initial_isa() {
  if (const char* env = std::getenv("HDGCD_SIMD")) {
    if (std::string(env) == "scalar") return Isa::Scalar;
  }
  return detected_isa();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

inline const Table& active() { return table_for(current().load(std::memory_order_relaxed)); }

void check_sizes(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("kernel size mismatch: ") + what);
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(HDGCD_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(HDGCD_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() {
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

Isa active_isa() { return current().load(); }

void force_isa(Isa isa) {
  if (!isa_available(isa))
    throw std::invalid_argument("SIMD target not available: " +
                                std::string(isa_name(isa)));
  current().store(isa);
}

void accumulate_weighted_products(std::span<const double> a, std::size_t m,
                                  std::span<const double> b, std::size_t n,
                                  std::span<const double> w,
                                  std::span<double> out) {
  const std::size_t nq = w.size();
  check_sizes(a.size() == m * nq, "a");
  check_sizes(b.size() == n * nq, "b");
  check_sizes(out.size() == m * n, "out");
  active().products(a.data(), m, b.data(), n, w.data(), nq, out.data());
}

double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w) {
  check_sizes(a.size() == w.size() && b.size() == w.size(), "dot");
  return active().dot(a.data(), b.data(), w.data(), w.size());
}

double weighted_sum_squares(std::span<const double> d,
                            std::span<const double> w) {
  check_sizes(d.size() == w.size(), "sum_squares");
  return active().sum_squares(d.data(), w.data(), w.size());
}

}  // namespace hdgcd::kernels
