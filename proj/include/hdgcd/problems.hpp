#pragma once
// Manufactured test problems with closed-form exact solutions.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hdgcd/analysis.hpp"
#include "hdgcd/problem.hpp"

namespace hdgcd {

struct ManufacturedCase {
  std::string name;
  ProblemSpec problem;
  ScalarField exact;
  VectorField gradient;
  MatrixField hessian;
  Region region;
  /// max of the exact solution over the domain, where known.
  std::optional<double> exact_max;
  /// Exactness used for the load integrals (0 keeps the solver default).
  int load_quad_order = 0;
  /// `exact` solves the eps = 0 reduced problem rather than `problem`.
  bool exact_is_reduced_limit = false;
};

/// u = sin(pi x) sin(pi y), b = (1, 1), c = 0, Dirichlet on the whole boundary.
ManufacturedCase case_smooth(double epsilon);
/// u = sin(pi x/2) sin(pi y/2) (1 - e^{(x-1)/eps}) (1 - e^{(y-1)/eps}),
/// b = (1, 1), c = 0; measured in (0, 0.9)^2.
ManufacturedCase case_layer(double epsilon);
/// b = (1, 0), c = 1, f = e^{-x}, Dirichlet on x = 0 and g_N = 0 elsewhere.
/// `exact` is the reduced solution u0 = x e^{-x}.
ManufacturedCase case_reduced_limit(double epsilon);
/// u = x with b = (1, 0), Dirichlet on x = 0 and Neumann data elsewhere.
ManufacturedCase case_linear(double epsilon = 1.0);
/// u = xy with the same boundary split as case_linear.
ManufacturedCase case_bilinear(double epsilon = 1.0);

std::vector<std::string> case_names();
/// Throws std::invalid_argument for an unknown name or epsilon <= 0.
ManufacturedCase case_by_name(std::string_view name, double epsilon);

struct SourceCheck {
  bool ok = true;
  double max_relative = 0.0;
  Vec2 worst{0.0, 0.0};
};

/// Compares f with -eps Lap u + b.grad u + c u, both derivatives taken by
/// fourth-order central differences of `exact` (step 1e-3), at `samples`
/// pseudo-random points of the case region pulled 2e-3 away from its boundary.
/// Skipped (ok) for reduced-limit cases.
SourceCheck verify_source(const ManufacturedCase& c, int samples = 1000,
                          double tolerance = 1e-8, unsigned seed = 12345);

}  // namespace hdgcd
