#include "holder/holder_dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "holder/error.hpp"

namespace holder {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kScanStep = 0.01;
constexpr double kRouteAgreement = 1e-8;
constexpr double kZeroQ = 1e-8;

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::classical: return "classical";
    case Regime::pre_transition: return "pre-transition";
    case Regime::post_transition: return "post-transition";
    case Regime::degenerate_zero: return "degenerate-zero";
    case Regime::ahlfors: return "ahlfors";
  }
  return "unknown";
}

std::optional<Regime> parse_regime(const std::string& s) {
  for (Regime r : {Regime::classical, Regime::pre_transition, Regime::post_transition,
                   Regime::degenerate_zero, Regime::ahlfors}) {
    if (s == to_string(r)) return r;
  }
  return std::nullopt;
}

const char* to_string(LevelSetCase c) {
  switch (c) {
    case LevelSetCase::q0_zero: return "q0_zero";
    case LevelSetCase::q0_negative: return "q0_negative";
    case LevelSetCase::q0_positive: return "q0_positive";
    case LevelSetCase::gamma_below: return "gamma_below";
    case LevelSetCase::gamma_above: return "gamma_above";
    case LevelSetCase::unresolved: return "unresolved";
  }
  return "unknown";
}

HolderAnalysis::HolderAnalysis(const ThermoSystem& sys, double alpha)
    : sys_(&sys),
      alpha_(alpha),
      inversion_(invert_gamma(sys, alpha)),
      last_(sys.alphabet() - 1),
      r0_(sys.fixed_point_ratio(0)),
      r1_(sys.fixed_point_ratio(sys.alphabet() - 1)) {}

double HolderAnalysis::q0() const { return inversion_.exists() ? inversion_.q0 : kNegInf; }

LevelSetDims HolderAnalysis::level_set_dims() const {
  const double delta = sys_->delta();
  LevelSetDims d;
  switch (inversion_.status) {
    case InversionStatus::gamma_below:
      d = {LevelSetCase::gamma_below, 0.0, delta};
      break;
    case InversionStatus::gamma_above:
      d = {LevelSetCase::gamma_above, delta, 0.0};
      break;
    case InversionStatus::degenerate_equal:
      d = {LevelSetCase::unresolved, std::nan(""), std::nan("")};
      break;
    case InversionStatus::exists: {
      const double q = inversion_.q0;
      if (std::abs(q) < kZeroQ) {
        d = {LevelSetCase::q0_zero, delta, delta};
      } else {
        const double h = sys_->temperature(q) + q * alpha_;
        d = q < 0.0 ? LevelSetDims{LevelSetCase::q0_negative, h, delta}
                    : LevelSetDims{LevelSetCase::q0_positive, delta, h};
      }
      break;
    }
  }
  return d;
}

double HolderAnalysis::constraint(double t, Symbol i) const {
  const double r = i == 0 ? r0_ : (i == last_ ? r1_ : sys_->fixed_point_ratio(i));
  return sys_->beta(t, alpha_) + t * r;
}

double HolderAnalysis::rightmost_root(Symbol i) const {
  const double r = i == 0 ? r0_ : r1_;
  const double t_max = sys_->config().t_max;
  double prev_t = 0.0;
  double prev_beta = sys_->delta();
  double prev_g = prev_beta;
  for (int k = 1;; ++k) {
    const double t = std::max(-t_max, -kScanStep * k);
    const double b = sys_->beta(t, alpha_, prev_beta);
    const double g = b + t * r;
    if (g <= 0.0) {
      if (g == 0.0) return t;
      return bisect([&](double s) { return sys_->beta(s, alpha_) + s * r; }, t, prev_t,
                    sys_->config());
    }
    // g is convex with g(0) > 0: once it grows leftward it never returns to zero.
    if (g > prev_g || t <= -t_max) return kNegInf;
    prev_t = t;
    prev_beta = b;
    prev_g = g;
  }
}

const Intersections& HolderAnalysis::intersections() const {
  if (!intersections_) {
    Intersections x;
    x.v0 = rightmost_root(0);
    x.v1 = last_ == 0 ? x.v0 : rightmost_root(last_);
    x.vbar = std::max(x.v0, x.v1);
    intersections_ = x;
  }
  return *intersections_;
}

double HolderAnalysis::dim_s_closed() const {
  switch (inversion_.status) {
    case InversionStatus::gamma_above: return 0.0;
    case InversionStatus::degenerate_equal: return sys_->delta();
    default: break;
  }
  const double t = std::max(intersections().vbar, q0());
  if (t == kNegInf) return sys_->beta(-sys_->config().t_max, alpha_);
  return sys_->beta(t, alpha_);
}

double HolderAnalysis::constrained_scan() const {
  const double t_max = sys_->config().t_max;
  const auto n = static_cast<std::size_t>(std::llround(2.0 * t_max / kScanStep)) + 1;
  std::vector<double> ts(n);
  std::vector<double> betas(n);
  std::vector<char> feasible(n);
  // Walk outward from t = 0 so every root solve is warm-started nearby.
  const std::size_t mid = (n - 1) / 2;
  auto eval = [&](std::size_t k, double guess) {
    ts[k] = -t_max + kScanStep * static_cast<double>(k);
    if (k == mid) ts[k] = 0.0;
    betas[k] = sys_->beta(ts[k], alpha_, guess);
    feasible[k] = betas[k] + ts[k] * r0_ >= 0.0 && betas[k] + ts[k] * r1_ >= 0.0;
  };
  eval(mid, sys_->delta());
  for (std::size_t k = mid + 1; k < n; ++k) eval(k, betas[k - 1]);
  for (std::size_t k = mid; k-- > 0;) eval(k, betas[k + 1]);

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_k = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (feasible[k] && betas[k] < best) {
      best = betas[k];
      best_k = k;
    }
  }
  if (best_k == n) {
    throw Error(ErrorKind::numerical_inconsistency, "constraint scan found no feasible point");
  }
  const auto slack = [&](double t) {
    const double b = sys_->beta(t, alpha_);
    return std::min(b + t * r0_, b + t * r1_);
  };
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (feasible[k] == feasible[k + 1]) continue;
    const double t = bisect(slack, ts[k], ts[k + 1], sys_->config());
    best = std::min(best, sys_->beta(t, alpha_));
  }
  if (best_k > 0 && best_k + 1 < n && feasible[best_k - 1] && feasible[best_k + 1]) {
    const auto f = [&](double t) { return sys_->beta(t, alpha_); };
    const double t = golden_minimize(f, ts[best_k - 1], ts[best_k + 1], 1e-7);
    best = std::min(best, f(t));
  }
  return best;
}

double HolderAnalysis::dim_s_scan() const {
  if (!scan_) {
    switch (inversion_.status) {
      case InversionStatus::gamma_above: scan_ = 0.0; break;
      default: scan_ = constrained_scan(); break;
    }
  }
  return *scan_;
}

double HolderAnalysis::dim_s() const {
  const double closed = dim_s_closed();
  const double scan = dim_s_scan();
  if (std::abs(closed - scan) > kRouteAgreement) {
    std::ostringstream os;
    os.precision(15);
    os << "dim_S routes disagree at alpha = " << alpha_ << ": closed " << closed << ", scan "
       << scan;
    throw Error(ErrorKind::numerical_inconsistency, os.str());
  }
  return closed;
}

Regime HolderAnalysis::regime() const {
  switch (inversion_.status) {
    case InversionStatus::gamma_above: return Regime::degenerate_zero;
    default: break;
  }
  if (sys_->is_ahlfors()) return Regime::ahlfors;
  if (inversion_.status == InversionStatus::gamma_below) return Regime::classical;
  return inversion_.q0 < intersections().vbar ? Regime::pre_transition
                                                : Regime::post_transition;
}

std::vector<Symbol> HolderAnalysis::violated_interior_symbols(double t) const {
  std::vector<Symbol> out;
  for (Symbol j = 1; j < last_; ++j) {
    if (constraint(t, j) < 0.0) out.push_back(j);
  }
  return out;
}

DimensionReport HolderAnalysis::report() const {
  DimensionReport r;
  r.alpha = alpha_;
  r.delta = sys_->delta();
  r.inversion = inversion_.status;
  r.q0 = q0();
  r.t0 = r.q0;
  const Intersections& x = intersections();
  r.v0 = x.v0;
  r.v1 = x.v1;
  r.vbar = x.vbar;
  if (inversion_.exists()) {
    r.spectrum = sys_->temperature(inversion_.q0) + inversion_.q0 * alpha_;
  } else if (inversion_.status == InversionStatus::degenerate_equal) {
    r.spectrum = r.delta;
  } else {
    r.spectrum = std::nan("");
  }
  const LevelSetDims d = level_set_dims();
  r.level_set_case = d.which;
  r.dim_s0 = d.dim_zero;
  r.dim_sinf = d.dim_infinite;
  r.dim_s_closed = dim_s_closed();
  r.dim_s_scan = dim_s_scan();
  r.dim_s = dim_s();
  r.regime = regime();

  if (inversion_.status != InversionStatus::gamma_above) {
    if (x.vbar == kNegInf && !inversion_.exists()) {
      r.warnings.emplace_back("no constraint intersection and no minimum of beta inside the "
                              "clamped range; dim_S evaluated at -t_max");
    }
    const double t_star = std::max(x.vbar, r.q0);
    if (std::isfinite(t_star)) {
      for (Symbol j : violated_interior_symbols(t_star)) {
        std::ostringstream os;
        os << "interior symbol " << j << " constraint is violated at t = " << t_star;
        r.warnings.push_back(os.str());
      }
    }
  }
  if (r.dim_s < -1e-12 || r.dim_s > r.delta + 1e-12) {
    r.warnings.emplace_back("dim_S outside [0, delta]");
  }
  return r;
}

DimensionReport analyze(const ThermoSystem& sys, double alpha) {
  return HolderAnalysis(sys, alpha).report();
}

bool past_transition(const ThermoSystem& sys, double alpha) {
  const HolderAnalysis h(sys, alpha);
  if (!h.inversion().exists() || sys.is_ahlfors()) return false;
  return h.intersections().vbar <= h.inversion().q0;
}

std::vector<double> phase_transition_locus(const SystemFamily& family, double alpha,
                                           double lo, double hi, double step,
                                           double tolerance) {
  if (!(hi > lo) || !(step > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "transition scan needs lo < hi and step > 0");
  }
  const auto flag = [&](double p) { return past_transition(family(p), alpha); };
  std::vector<double> out;
  double prev_p = lo;
  bool prev_flag = flag(lo);
  const auto steps = static_cast<long>(std::ceil((hi - lo) / step - 1e-9));
  for (long k = 1; k <= steps; ++k) {
    const double p = std::min(hi, lo + step * static_cast<double>(k));
    const bool f = flag(p);
    if (f != prev_flag) {
      double a = prev_p;
      double b = p;
      while (b - a > tolerance) {
        const double m = 0.5 * (a + b);
        if (flag(m) == prev_flag) {
          a = m;
        } else {
          b = m;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    prev_p = p;
    prev_flag = f;
  }
  return out;
}

}  // namespace holder
