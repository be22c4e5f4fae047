#include "holder/multifractal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "holder/error.hpp"
#include "holder/reduce.hpp"

namespace holder {

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw Error(ErrorKind::invalid_argument, "grid needs lo <= hi and step > 0");
  }
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo + static_cast<double>(i) * step;
  return grid;
}

std::vector<double> default_q_grid() { return uniform_grid(-20.0, 20.0, 0.1); }

std::vector<double> refine_grid(std::vector<double> grid, double q0) {
  for (int i = -10; i <= 10; ++i) grid.push_back(q0 + 0.01 * i);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             grid.end());
  return grid;
}

SpectrumResult spectrum_scan(const ThermoSystem& sys, const std::vector<double>& q_grid,
                             unsigned workers) {
  SpectrumResult out;
  out.trivial = sys.is_ahlfors();
  out.gamma_range = sys.gamma_range();
  out.points.resize(q_grid.size());
  parallel_for(q_grid.size(), workers, [&](std::size_t i) {
    SpectrumPoint& p = out.points[i];
    p.q = q_grid[i];
    p.temperature = sys.temperature(p.q);
    const GammaEstimate g = sys.gamma(p.q);
    p.gamma = g.gibbs;
    p.gamma_fd = g.finite_difference;
    p.spectrum = p.temperature + p.q * p.gamma;
  });
  return out;
}

const char* to_string(InversionStatus s) {
  switch (s) {
    case InversionStatus::exists: return "exists";
    case InversionStatus::gamma_below: return "gamma_below";
    case InversionStatus::gamma_above: return "gamma_above";
    case InversionStatus::degenerate_equal: return "degenerate_equal";
  }
  return "unknown";
}

GammaInversion invert_gamma(const ThermoSystem& sys, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::invalid_argument, "alpha must be a positive finite number");
  }
  GammaInversion out;
  if (sys.is_ahlfors()) {
    // Normalized psi with constant ratio forces psi = delta phi.
    const double c = sys.delta();
    if (std::abs(c - alpha) <= 1e-12 * std::max(1.0, alpha)) {
      out.status = InversionStatus::degenerate_equal;
    } else {
      out.status = c < alpha ? InversionStatus::gamma_below : InversionStatus::gamma_above;
    }
    return out;
  }
  const GammaRange range = sys.gamma_range();
  if (alpha <= range.min) {
    out.status = InversionStatus::gamma_above;
    return out;
  }
  if (alpha >= range.max) {
    out.status = InversionStatus::gamma_below;
    return out;
  }
  out.q0 = solve_decreasing([&](double q) { return sys.gamma_gibbs(q) - alpha; }, 0.0, 1.0,
                            sys.config());
  return out;
}

namespace {

double spectrum_impl(const ThermoSystem& sys, double alpha, bool via_beta) {
  const GammaInversion inv = invert_gamma(sys, alpha);
  if (inv.status == InversionStatus::degenerate_equal) return sys.delta();
  if (!inv.exists()) {
    std::ostringstream os;
    os << "no q with gamma(q) = " << alpha << " (" << to_string(inv.status) << ")";
    throw Error(ErrorKind::undefined_spectrum, os.str());
  }
  if (via_beta) return sys.beta(inv.q0, alpha);
  return sys.temperature(inv.q0) + inv.q0 * alpha;
}

}  // namespace

double spectrum_at(const ThermoSystem& sys, double alpha) {
  return spectrum_impl(sys, alpha, false);
}

double spectrum_at_via_beta(const ThermoSystem& sys, double alpha) {
  return spectrum_impl(sys, alpha, true);
}

}  // namespace holder
