#include "holder/root_finding.hpp"

#include <cmath>
#include <sstream>

#include "holder/error.hpp"

namespace holder {

namespace {

double refine_bracket(const std::function<double(double)>& f, double lo, double flo,
                      double hi, double fhi, const SolverConfig& cfg) {
  // Invariant: flo and fhi have opposite signs (neither is zero).
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= cfg.tolerance || mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  const double denom = flo - fhi;
  if (denom == 0.0 || !std::isfinite(denom)) return 0.5 * (lo + hi);
  const double x = lo + flo * (hi - lo) / denom;
  return (x >= lo && x <= hi) ? x : 0.5 * (lo + hi);
}

}  // namespace

double bisect(const std::function<double(double)>& f, double lo, double hi,
              const SolverConfig& cfg) {
  if (lo > hi) std::swap(lo, hi);
  const double flo = f(lo);
  if (flo == 0.0) return lo;
  const double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream os;
    os << "no sign change on [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::bracket_failure, os.str());
  }
  return refine_bracket(f, lo, flo, hi, fhi, cfg);
}

double solve_decreasing(const std::function<double(double)>& f, double guess,
                        double initial_step, const SolverConfig& cfg) {
  const double f0 = f(guess);
  if (f0 == 0.0) return guess;
  if (!std::isfinite(f0)) {
    throw Error(ErrorKind::bracket_failure, "function is not finite at the initial guess");
  }
  double step = initial_step > 0.0 ? initial_step : 1.0;
  double near = guess;
  double fnear = f0;
  // A decreasing function with f(guess) > 0 has its root to the right.
  const double dir = f0 > 0.0 ? 1.0 : -1.0;
  for (int i = 0; i < cfg.bracket_expansions; ++i) {
    const double far = near + dir * step;
    const double ffar = f(far);
    if (ffar == 0.0) return far;
    if ((ffar > 0.0) != (f0 > 0.0)) {
      return dir > 0 ? refine_bracket(f, near, fnear, far, ffar, cfg)
                     : refine_bracket(f, far, ffar, near, fnear, cfg);
    }
    near = far;
    fnear = ffar;
    step *= 2.0;
  }
  throw Error(ErrorKind::bracket_failure, "bracket expansion limit reached");
}

double golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                       double tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace holder
