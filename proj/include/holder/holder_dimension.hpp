#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "holder/multifractal.hpp"

namespace holder {

enum class Regime { classical, pre_transition, post_transition, degenerate_zero, ahlfors };
const char* to_string(Regime r);
std::optional<Regime> parse_regime(const std::string& s);

enum class LevelSetCase { q0_zero, q0_negative, q0_positive, gamma_below, gamma_above, unresolved };
const char* to_string(LevelSetCase c);

struct LevelSetDims {
  LevelSetCase which = LevelSetCase::unresolved;
  /// Dimension of the set where the Hoelder derivative vanishes.
  double dim_zero = 0.0;
  /// Dimension of the set where it is infinite.
  double dim_infinite = 0.0;
};

/// Rightmost roots of beta(t) + t r_i on [-t_max, 0] for the two extreme
/// symbols; -infinity when there is none.
struct Intersections {
  double v0 = 0.0;
  double v1 = 0.0;
  double vbar = 0.0;
};

struct DimensionReport {
  double alpha = 0.0;
  double delta = 0.0;
  InversionStatus inversion = InversionStatus::exists;
  /// Root of gamma = alpha, or -infinity.
  double q0 = 0.0;
  /// Argmin of beta; same value as q0.
  double t0 = 0.0;
  double v0 = 0.0;
  double v1 = 0.0;
  double vbar = 0.0;
  /// H(alpha), NaN when undefined.
  double spectrum = 0.0;
  double dim_s0 = 0.0;
  double dim_sinf = 0.0;
  double dim_s = 0.0;
  /// The two independent evaluations of dim_s.
  double dim_s_scan = 0.0;
  double dim_s_closed = 0.0;
  Regime regime = Regime::classical;
  LevelSetCase level_set_case = LevelSetCase::unresolved;
  std::vector<std::string> warnings;
};

/// Hoelder-derivative dimension calculus for one (phi, psi) pair and alpha.
class HolderAnalysis {
 public:
  HolderAnalysis(const ThermoSystem& sys, double alpha);

  const ThermoSystem& system() const { return *sys_; }
  double alpha() const { return alpha_; }
  const GammaInversion& inversion() const { return inversion_; }
  /// q0 or -infinity.
  double q0() const;

  LevelSetDims level_set_dims() const;
  const Intersections& intersections() const;
  /// Constrained infimum of beta over {t : beta(t) >= -t r_i, i extreme}.
  double dim_s() const;
  double dim_s_scan() const;
  double dim_s_closed() const;
  Regime regime() const;

  /// beta(t) + t r_i for the extreme symbol i (0 or last).
  double constraint(double t, Symbol i) const;
  /// Interior symbols j with beta(t) + t r_j < 0 at t.
  std::vector<Symbol> violated_interior_symbols(double t) const;

  DimensionReport report() const;

 private:
  double rightmost_root(Symbol i) const;
  double constrained_scan() const;

  const ThermoSystem* sys_;
  double alpha_;
  GammaInversion inversion_;
  Symbol last_;
  double r0_;
  double r1_;
  mutable std::optional<Intersections> intersections_;
  mutable std::optional<double> scan_;
};

/// One-call version of HolderAnalysis(sys, alpha).report().
DimensionReport analyze(const ThermoSystem& sys, double alpha);

/// Parameterized family p -> system.
using SystemFamily = std::function<ThermoSystem(double)>;

/// True when the minimum of beta is feasible (v̄ <= q0 with q0 existing).
bool past_transition(const ThermoSystem& sys, double alpha);

/// Parameter values in [lo, hi] where past_transition flips, located by a
/// scan at `step` followed by bisection to `tolerance`. Empty when constant.
std::vector<double> phase_transition_locus(const SystemFamily& family, double alpha,
                                           double lo, double hi, double step = 0.01,
                                           double tolerance = 1e-10);

}  // namespace holder
