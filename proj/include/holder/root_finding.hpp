#pragma once

#include <functional>

namespace holder {

struct SolverConfig {
  /// Maximum number of bracket doublings before giving up.
  int bracket_expansions = 64;
  /// Bisection stops once the bracket is narrower than this.
  double tolerance = 1e-12;
  int max_iterations = 200;
  /// Central-difference step used for derivative cross-checks.
  double fd_step = 1e-5;
  /// Clamp for q and t when searching for roots and limits.
  double t_max = 100.0;
  /// Required agreement between the Gibbs-expectation and finite-difference gamma.
  double gamma_agreement = 1e-6;
};

/// Root of a strictly decreasing scalar function. The bracket is grown by
/// doubling from [guess - step, guess + step]; bisection is finished by one
/// secant step inside the final bracket.
double solve_decreasing(const std::function<double(double)>& f, double guess,
                        double initial_step, const SolverConfig& cfg);

/// Bisection on [lo, hi] where f(lo) and f(hi) have opposite signs.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              const SolverConfig& cfg);

/// Golden-section minimiser on [lo, hi]; returns the abscissa.
double golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                       double tolerance);

}  // namespace holder
