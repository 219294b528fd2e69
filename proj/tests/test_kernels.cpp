#include <doctest.h>

#include <random>
#include <vector>

#include "hdgcd/kernels.hpp"
#include "hdgcd/problems.hpp"
#include "hdgcd/solver.hpp"

using namespace hdgcd;
namespace kn = hdgcd::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

std::vector<kn::Isa> available() {
  std::vector<kn::Isa> out;
  for (kn::Isa isa : {kn::Isa::Scalar, kn::Isa::Avx2, kn::Isa::Neon})
    if (kn::isa_available(isa)) out.push_back(isa);
  return out;
}

// Restores the dispatch target on scope exit.
struct IsaGuard {
  kn::Isa saved = kn::active_isa();
  ~IsaGuard() { kn::force_isa(saved); }
};

}  // namespace

TEST_CASE("every available kernel set matches the scalar reference") {
  IsaGuard guard;
  std::mt19937_64 rng(77);
  for (std::size_t nq : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 15u, 16u, 17u, 33u, 67u}) {
    for (std::size_t m : {1u, 3u, 6u}) {
      const std::size_t n = m + 1;
      const auto a = random_vector(m * nq, rng), b = random_vector(n * nq, rng), w = random_vector(nq, rng);
      std::vector<double> ref(m * n, 0.5);
      kn::scalar::accumulate_weighted_products(a.data(), m, b.data(), n, w.data(), nq, ref.data());
      const double dot_ref = kn::scalar::weighted_dot(a.data(), b.data(), w.data(), nq);
      const double sq_ref = kn::scalar::weighted_sum_squares(a.data(), w.data(), nq);
      for (kn::Isa isa : available()) {
        CAPTURE(kn::isa_name(isa));
        CAPTURE(nq);
        kn::force_isa(isa);
        std::vector<double> out(m * n, 0.5);
        kn::accumulate_weighted_products(std::span<const double>(a.data(), m * nq), m,
                                         std::span<const double>(b.data(), n * nq), n,
                                         std::span<const double>(w.data(), nq), out);
        for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == doctest::Approx(ref[i]).epsilon(1e-13));
        CHECK(kn::weighted_dot(std::span<const double>(a.data(), nq), std::span<const double>(b.data(), nq), w) ==
              doctest::Approx(dot_ref).epsilon(1e-13));
        CHECK(kn::weighted_sum_squares(std::span<const double>(a.data(), nq), w) ==
              doctest::Approx(sq_ref).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("dispatch") {
  IsaGuard guard;
  CHECK(kn::isa_available(kn::Isa::Scalar));
  CHECK(kn::isa_available(kn::detected_isa()));
  kn::force_isa(kn::Isa::Scalar);
  CHECK(kn::active_isa() == kn::Isa::Scalar);
  for (kn::Isa isa : {kn::Isa::Avx2, kn::Isa::Neon})
    if (!kn::isa_available(isa)) CHECK_THROWS_AS(kn::force_isa(isa), std::invalid_argument);
  std::vector<double> a(3), w(4), out(1);
  CHECK_THROWS_AS(kn::weighted_sum_squares(a, w), std::invalid_argument);
  CHECK_THROWS_AS(kn::accumulate_weighted_products(a, 1, a, 1, w, out), std::invalid_argument);
  CHECK(kn::isa_name(kn::Isa::Avx2) == "avx2");
}

TEST_CASE("full solves agree across kernel sets") {
  IsaGuard guard;
  const ManufacturedCase c = case_smooth(1e-3);
  const Mesh m = build_uniform_triangulation(8);
  AssemblyOptions opt;
  opt.degree = 2;
  kn::force_isa(kn::Isa::Scalar);
  const HdgSolution ref = solve_hdg(c.problem, m, opt);
  for (kn::Isa isa : available()) {
    kn::force_isa(isa);
    const HdgSolution s = solve_hdg(c.problem, m, opt);
    CHECK((s.traces - ref.traces).norm() <= 1e-12 * ref.traces.norm());
    CHECK((s.interior.coefficients() - ref.interior.coefficients()).norm() <=
          1e-12 * ref.interior.coefficients().norm());
  }
}
