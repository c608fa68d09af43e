#pragma once

#include "sbethe/linalg.hpp"
#include "sbethe/semiclassical.hpp"

namespace sbethe {

struct collision_error : numeric_error {
  using numeric_error::numeric_error;
};

/// Candidate equilibrium configuration z_1..z_n with solver metadata.
struct Configuration {
  std::vector<Complex> points;
  int n = 0;
  Real residual_norm;  // sup norm at the returned points
  bool converged = false;
  int iterations = 0;
};

struct SeedSpec {
  enum class Strategy { classical_zeros, scaled_roots_of_unity, user_list, random_disk };
  Strategy strategy = Strategy::classical_zeros;
  double scale = 0.0;  // 0 selects the class heuristic
  double jitter = 1e-3;
  unsigned long rng_seed = 1;
  std::vector<Complex> user_points;
};

/// r_j = sum_{k != j} 1/(z_j - z_k) - A(z_j)/(2 B(z_j)).
/// Throws collision_error on near-coincident points and numeric_error when a
/// point sits on a zero of B.
std::vector<Complex> residual(const SemiclassicalType& t, const std::vector<Complex>& pts);

/// Analytic Jacobian of the residual; (A/2B)' by the quotient rule.
Matrix jacobian(const SemiclassicalType& t, const std::vector<Complex>& pts);

std::vector<Complex> seed_points(const SemiclassicalType& t, int n, const SeedSpec& seed);

/// Damped Newton iteration (step halving while the l2 residual does not
/// decrease, at most 30 halvings) until the sup-norm residual drops below
/// tol.  Collisions and singular Jacobians trigger a reseed with a fresh
/// jitter stream, up to 5 retries.
Configuration solve(const SemiclassicalType& t, int n, const SeedSpec& seed, const Real& tol,
                    int max_iter = 200);

/// E = -2 sum_{i<j} log|z_i - z_j| + sum_j Q(z_j) with Q = 2 Re theta_hat.
Real energy(const SemiclassicalType& t, const Configuration& cfg);

}  // namespace sbethe
