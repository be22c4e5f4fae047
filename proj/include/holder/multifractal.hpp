#pragma once

#include <optional>
#include <vector>

#include "holder/pressure.hpp"

namespace holder {

struct SpectrumPoint {
  double q = 0.0;
  double temperature = 0.0;
  double gamma = 0.0;
  /// Finite-difference cross-check of gamma.
  double gamma_fd = 0.0;
  /// H(gamma(q)) = T(q) + q gamma(q).
  double spectrum = 0.0;
};

struct SpectrumResult {
  std::vector<SpectrumPoint> points;
  /// gamma is constant (psi / phi constant).
  bool trivial = false;
  GammaRange gamma_range;
};

/// 401 points on [-20, 20].
std::vector<double> default_q_grid();
std::vector<double> uniform_grid(double lo, double hi, double step);
/// Grid with 21 extra points at spacing 0.01 centred on q0, sorted and deduplicated.
std::vector<double> refine_grid(std::vector<double> grid, double q0);

/// Grid points are evaluated independently and stored in grid order.
SpectrumResult spectrum_scan(const ThermoSystem& sys, const std::vector<double>& q_grid,
                             unsigned workers = 1);

enum class InversionStatus {
  exists,
  /// gamma < alpha for every q.
  gamma_below,
  /// gamma > alpha for every q.
  gamma_above,
  /// gamma is constant and equal to alpha.
  degenerate_equal,
};

const char* to_string(InversionStatus s);

struct GammaInversion {
  InversionStatus status = InversionStatus::exists;
  /// Root of gamma(q) = alpha; only meaningful when status == exists.
  double q0 = 0.0;

  bool exists() const { return status == InversionStatus::exists; }
};

/// Solves gamma(q) = alpha. Depth-1 systems decide existence from the
/// per-symbol ratios; deeper ones from gamma(+-t_max). The root search is
/// not limited to [-t_max, t_max].
GammaInversion invert_gamma(const ThermoSystem& sys, double alpha);

/// H(alpha) = T(q0) + q0 alpha; delta in the degenerate-equal case.
/// Throws undefined_spectrum when no q0 exists.
double spectrum_at(const ThermoSystem& sys, double alpha);
/// Same value through beta(q0).
double spectrum_at_via_beta(const ThermoSystem& sys, double alpha);

}  // namespace holder
