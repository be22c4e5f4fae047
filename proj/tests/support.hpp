#pragma once

// Closed-form and brute-force references for two- and many-map affine
// systems with Bernoulli weights. Nothing here calls the library solvers.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "holder/io.hpp"
#include "holder/pressure.hpp"

namespace oracle {

struct Affine {
  std::vector<double> a;
  std::vector<double> p;
};

/// Root given a sign change on [lo, hi], by plain bisection.
inline double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// log sum_j p_j^q a_j^s.
inline double log_moment(const Affine& s, double exp_a, double exp_p) {
  double hi = -INFINITY;
  for (std::size_t j = 0; j < s.a.size(); ++j) {
    hi = std::max(hi, exp_a * std::log(s.a[j]) + exp_p * std::log(s.p[j]));
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < s.a.size(); ++j) {
    sum += std::exp(exp_a * std::log(s.a[j]) + exp_p * std::log(s.p[j]) - hi);
  }
  return hi + std::log(sum);
}

inline double root_in_s(const std::function<double(double)>& f) {
  double lo = -1.0;
  double hi = 1.0;
  while (f(lo) < 0) lo *= 2;
  while (f(hi) > 0) hi *= 2;
  return bisect_root(f, lo, hi);
}

inline double delta(const Affine& s) {
  return root_in_s([&](double x) { return log_moment(s, x, 0.0); });
}

inline double temperature(const Affine& s, double q) {
  return root_in_s([&](double x) { return log_moment(s, x, q); });
}

/// Root of sum p_j^t a_j^(b - alpha t) = 1.
inline double beta(const Affine& s, double t, double alpha) {
  return root_in_s([&](double b) { return log_moment(s, b - alpha * t, t); });
}

/// (sum w_j log p_j) / (sum w_j log a_j) with w_j = p_j^q a_j^T(q).
inline double gamma(const Affine& s, double q) {
  const double t = temperature(s, q);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < s.a.size(); ++j) {
    const double w = std::pow(s.p[j], q) * std::pow(s.a[j], t);
    num += w * std::log(s.p[j]);
    den += w * std::log(s.a[j]);
  }
  return num / den;
}

/// q with gamma(q) = alpha; NaN when outside the ratio range.
inline double q_of_alpha(const Affine& s, double alpha) {
  double lo_ratio = INFINITY;
  double hi_ratio = -INFINITY;
  for (std::size_t j = 0; j < s.a.size(); ++j) {
    const double r = std::log(s.p[j]) / std::log(s.a[j]);
    lo_ratio = std::min(lo_ratio, r);
    hi_ratio = std::max(hi_ratio, r);
  }
  if (!(alpha > lo_ratio && alpha < hi_ratio)) return NAN;
  double lo = -1.0;
  double hi = 1.0;
  while (gamma(s, lo) < alpha) lo *= 2;
  while (gamma(s, hi) > alpha) hi *= 2;
  return bisect_root([&](double q) { return gamma(s, q) - alpha; }, lo, hi);
}

inline double ratio(const Affine& s, std::size_t j) { return std::log(s.p[j]) / std::log(s.a[j]); }

/// Brute-force constrained infimum of beta over feasible t in [-tmax, tmax]:
/// full grid at step 1e-2, then either boundary bisection or ternary search
/// around the best grid point.
inline double dim_s_bruteforce(const Affine& s, double alpha, double tmax = 100.0) {
  const double r0 = ratio(s, 0);
  const double r1 = ratio(s, s.a.size() - 1);
  const auto slack = [&](double t) {
    const double b = beta(s, t, alpha);
    return std::min(b + t * r0, b + t * r1);
  };
  const double h = 1e-2;
  const int n = static_cast<int>(std::lround(2 * tmax / h));
  double best = INFINITY;
  int best_k = -1;
  std::vector<char> feasible(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    const double t = -tmax + k * h;
    feasible[static_cast<std::size_t>(k)] = slack(t) >= 0;
    if (feasible[static_cast<std::size_t>(k)]) {
      const double b = beta(s, t, alpha);
      if (b < best) {
        best = b;
        best_k = k;
      }
    }
  }
  for (int k = std::max(0, best_k - 1); k <= std::min(n - 1, best_k); ++k) {
    if (feasible[static_cast<std::size_t>(k)] != feasible[static_cast<std::size_t>(k + 1)]) {
      const double t = bisect_root(slack, -tmax + k * h, -tmax + (k + 1) * h);
      best = std::min(best, beta(s, t, alpha));
    }
  }
  if (best_k > 0 && best_k < n && feasible[static_cast<std::size_t>(best_k - 1)] &&
      feasible[static_cast<std::size_t>(best_k + 1)]) {
    double a = -tmax + (best_k - 1) * h;
    double b = -tmax + (best_k + 1) * h;
    for (int i = 0; i < 100; ++i) {
      const double m1 = a + (b - a) / 3;
      const double m2 = b - (b - a) / 3;
      if (beta(s, m1, alpha) < beta(s, m2, alpha)) b = m2; else a = m1;
    }
    best = std::min(best, beta(s, 0.5 * (a + b), alpha));
  }
  return best;
}

inline holder::Ifs make_ifs(const std::vector<double>& a) {
  // Maps packed left to right with equal gaps.
  double total = 0.0;
  for (double x : a) total += x;
  const double gap = a.size() > 1 ? (1.0 - total) / static_cast<double>(a.size() - 1) : 0.0;
  std::vector<holder::AffineMap> maps;
  double offset = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    // Pin the last map to the right end so rounding never leaves the seed.
    const bool last = a.size() > 1 && j + 1 == a.size();
    maps.push_back({a[j], last ? 1.0 - a[j] : offset});
    offset += a[j] + gap;
  }
  return holder::Ifs::affine(maps);
}

inline holder::ThermoSystem make_system(const Affine& s, holder::SolverConfig cfg = {}) {
  const holder::Ifs ifs = make_ifs(s.a);
  return holder::ThermoSystem(holder::geometric_potential(ifs), holder::bernoulli_potential(s.p),
                              cfg);
}

/// p_j = a_j^delta.
inline Affine ahlfors(const std::vector<double>& a) {
  Affine s{a, {}};
  const double d = delta(Affine{a, std::vector<double>(a.size(), 1.0)});
  for (double x : a) s.p.push_back(std::pow(x, d));
  double sum = 0.0;
  for (double x : s.p) sum += x;
  for (double& x : s.p) x /= sum;
  return s;
}

/// Two maps with a_j in [0.05, 0.45] and p0 in (0.02, 0.98).
inline Affine random_two_map(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ad(0.05, 0.45);
  std::uniform_real_distribution<double> pd(0.02, 0.98);
  const double p0 = pd(rng);
  return Affine{{ad(rng), ad(rng)}, {p0, 1.0 - p0}};
}

}  // namespace oracle
