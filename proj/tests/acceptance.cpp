// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "holder/error.hpp"
#include "holder/holder_dimension.hpp"
#include "holder/oracle.hpp"
#include "holder/pressure.hpp"
#include "holder/staircase.hpp"
#include "support.hpp"

using namespace holder;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

class Gate {
 public:
  void run(int id, const char* title, double budget_seconds, const std::function<Verdict()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = body();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < budget_seconds;
    const bool ok = v.pass && in_time;
    if (!ok) ++failures_;
    std::printf("criterion %2d %-34s %s  (%.2fs of %.0fs; %s%s)\n", id, title, ok ? "PASS" : "FAIL",
                secs, budget_seconds, v.detail.c_str(), in_time ? "" : "; over time budget");
    std::fflush(stdout);
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

std::string fmt(const char* pattern, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::string fmt2(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

/// H(alpha) through the Legendre route and the beta route of the closed-form oracle.
struct DualSpectrum {
  double legendre = NAN;
  double via_beta = NAN;
};

DualSpectrum dual_spectrum(const oracle::Affine& s, double alpha) {
  const double q0 = oracle::q_of_alpha(s, alpha);
  if (std::isnan(q0)) return {};
  return {oracle::temperature(s, q0) + q0 * alpha, oracle::beta(s, q0, alpha)};
}

Verdict darst() {
  const auto sys = oracle::make_system({{1.0 / 3, 1.0 / 3}, {0.5, 0.5}});
  const double expected = std::pow(std::log(2.0) / std::log(3.0), 2);
  const double got = HolderAnalysis(sys, 1.0).dim_s();
  const double err = std::abs(got - expected);
  return {err < 1e-9, fmt2("dim_S=%.12f, |err|=%.1e", got, err)};
}

Verdict ahlfors_law() {
  std::mt19937_64 rng(2024);
  // Ratio ranges keep delta below the smallest alpha tested.
  std::uniform_real_distribution<double> ratio(0.05, 0.2);
  std::uniform_real_distribution<double> small_ratio(0.05, 0.1);
  double worst_dim = 0.0;
  double worst_vbar = 0.0;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> a;
    if (i % 2 == 0) {
      a = {ratio(rng), ratio(rng)};
    } else {
      a = {small_ratio(rng), small_ratio(rng), small_ratio(rng)};
    }
    const auto sys = oracle::make_system(oracle::ahlfors(a));
    const double d = sys.delta();
    for (double alpha : {0.5, 0.8, 1.0, 1.3}) {
      const HolderAnalysis h(sys, alpha);
      worst_dim = std::max(worst_dim, std::abs(h.dim_s() - d * d / alpha));
      worst_vbar = std::max(worst_vbar, std::abs(h.intersections().vbar + d / alpha));
    }
  }
  return {worst_dim < 1e-9 && worst_vbar < 1e-9,
          fmt2("max|dim_S-d^2/a|=%.1e, max|vbar+d/a|=%.1e", worst_dim, worst_vbar)};
}

Verdict identities() {
  std::vector<ThermoSystem> systems;
  const std::vector<oracle::Affine> affine{
      {{1.0 / 3, 1.0 / 3}, {0.5, 0.5}}, {{1.0 / 3, 1.0 / 3}, {0.8, 0.2}},
      {{0.2, 0.1}, {0.8, 0.2}},         {{0.2, 0.1}, {0.89, 0.11}},
      {{0.2, 0.1}, {0.999, 0.001}},     {{0.2, 0.3, 0.1}, {0.5, 0.2, 0.3}},
      {{1.0 / 3, 1.0 / 3}, {0.1, 0.9}}};
  for (const auto& s : affine) systems.push_back(oracle::make_system(s));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) systems.push_back(oracle::make_system(oracle::random_two_map(rng)));
  const auto phi2 = geometric_potential(oracle::make_ifs({0.3, 0.2}), 2);
  const LocallyConstantPotential raw(2, 2, {-0.3, -1.2, -0.9, -0.6});
  systems.emplace_back(phi2, normalize(raw, pressure(raw)).potential);

  double worst = 0.0;
  double worst_bridge = 0.0;
  int bridges = 0;
  for (const auto& sys : systems) {
    worst = std::max({worst, std::abs(sys.temperature(0.0) - sys.delta()),
                      std::abs(sys.temperature(1.0))});
    for (double alpha : {0.5, 0.8, 1.0, 1.3}) {
      worst = std::max({worst, std::abs(sys.beta(0.0, alpha) - sys.delta()),
                        std::abs(sys.beta(1.0, alpha) - alpha)});
      const auto inv = invert_gamma(sys, alpha);
      if (inv.exists()) {
        ++bridges;
        worst_bridge = std::max(worst_bridge, std::abs(sys.beta(inv.q0, alpha) - spectrum_at(sys, alpha)));
      }
    }
  }
  return {worst < 1e-10 && worst_bridge < 1e-9 && bridges > 0,
          fmt2("max identity err=%.1e, max |beta(t0)-H|=%.1e", worst, worst_bridge) + " over " +
              std::to_string(bridges) + " bridges"};
}

Verdict figure_regimes() {
  const Regime expected[] = {Regime::classical, Regime::pre_transition, Regime::post_transition};
  const double p0s[] = {0.8, 0.89, 0.999};
  bool ok = true;
  std::string labels;
  double post_err = NAN;
  for (int i = 0; i < 3; ++i) {
    const oracle::Affine s{{0.2, 0.1}, {p0s[i], 1.0 - p0s[i]}};
    const auto sys = oracle::make_system(s);
    const HolderAnalysis h(sys, 0.8);
    const Regime r = h.regime();
    ok = ok && r == expected[i];
    labels += std::string(i ? "/" : "") + to_string(r);
    if (r == Regime::post_transition) {
      post_err = std::abs(h.dim_s() - spectrum_at(sys, 0.8));
      ok = ok && post_err < 1e-8;
    }
  }
  return {ok && !std::isnan(post_err), labels + fmt(", post |dim_S-H|=%.1e", post_err)};
}

Verdict sweep() {
  const auto family = [](double p) { return oracle::make_system({{1.0 / 3, 1.0 / 3}, {p, 1.0 - p}}); };
  const auto loci = phase_transition_locus(family, 1.0, 0.01, 0.99);
  bool located = false;
  for (double p : loci) located = located || (p >= 0.15 && p <= 0.25);
  double worst = 0.0;
  int post = 0;
  for (int i = 1; i <= 99; ++i) {
    const double p = 0.01 * i;
    const auto sys = family(p);
    const HolderAnalysis h(sys, 1.0);
    if (h.regime() != Regime::post_transition) continue;
    ++post;
    worst = std::max(worst, std::abs(h.dim_s() - spectrum_at(sys, 1.0)));
  }
  std::string where;
  for (double p : loci) where += fmt(" %.6f", p);
  return {located && post > 0 && worst < 1e-8,
          "loci" + where + fmt(", max post |dim_S-H(1)|=%.1e", worst)};
}

Verdict oracle_equivalence() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-2.5, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const LocallyConstantPotential pot(2, 1, {u(rng), u(rng)});
    for (int n = 1; n <= 20; ++n) worst = std::max(worst, std::abs(pressure_direct(pot, n) - pressure(pot)));
  }
  const LocallyConstantPotential d2(2, 2, {-0.3, -1.2, -0.9, -0.6});
  const double exact = pressure(d2);
  bool monotone = true;
  double prev = INFINITY;
  double bound = 0.0;
  for (int n = 4; n <= 16; ++n) {
    const double diff = std::abs(pressure_direct(d2, n) - exact);
    monotone = monotone && diff < prev;
    prev = diff;
    bound = std::max(bound, n * diff);
  }
  return {worst < 1e-12 && monotone && bound < 2.0,
          fmt2("depth-1 max err=%.1e, depth-2 max n|diff|=%.4f", worst, bound) +
              (monotone ? ", shrinking" : ", NOT shrinking")};
}

Verdict coarse() {
  const oracle::Affine s{{1.0 / 3, 1.0 / 3}, {0.8, 0.2}};
  const auto sys = oracle::make_system(s);
  std::vector<SpectrumBin> bins;
  for (double c : {0.45, 0.63, 0.83, 1.1}) bins.push_back({c, 0.05});
  const auto res = coarse_spectrum(sys.psi(), sys.phi(), bins, 20, CountingMethod::binomial);
  double worst = 0.0;
  std::string detail;
  for (const auto& b : res) {
    const double h = spectrum_at(sys, b.center);
    const double err = std::abs(b.estimate - h);
    worst = std::isnan(err) ? INFINITY : std::max(worst, err);
    detail += fmt2(" %.2f:%.3f", b.center, err);
  }
  return {worst < 0.08, "|h-H| per bin" + detail};
}

Verdict case_table() {
  const oracle::Affine s{{1.0 / 3, 1.0 / 3}, {0.8, 0.2}};
  const auto sys = oracle::make_system(s);
  const double d = sys.delta();
  const auto at_zero = HolderAnalysis(sys, oracle::gamma(s, 0.0)).level_set_dims();
  const auto at_one = HolderAnalysis(sys, 1.0).level_set_dims();
  const auto dual = dual_spectrum(s, 1.0);
  const auto mt = oracle::make_system({{1.0 / 3, 1.0 / 3}, {0.5, 0.5}});
  const auto equal = HolderAnalysis(mt, 1.0).level_set_dims();
  const double e1 = std::max(std::abs(at_zero.dim_zero - d), std::abs(at_zero.dim_infinite - d));
  const double e2 = std::max({std::abs(at_one.dim_zero - dual.legendre),
                              std::abs(at_one.dim_zero - dual.via_beta),
                              std::abs(at_one.dim_infinite - d)});
  const double e3 = std::max(std::abs(equal.dim_zero), std::abs(equal.dim_infinite - mt.delta()));
  const bool cases = at_zero.which == LevelSetCase::q0_zero &&
                     at_one.which == LevelSetCase::q0_negative &&
                     equal.which == LevelSetCase::gamma_below;
  return {cases && e1 < 1e-8 && e2 < 1e-8 && e3 < 1e-8,
          fmt2("errs %.1e, %.1e", e1, e2) + fmt(", %.1e", e3)};
}

Verdict staircase() {
  const Ifs ifs = oracle::make_ifs({1.0 / 3, 1.0 / 3});
  const std::vector<double> p{0.8, 0.2};
  const GibbsMeasure mu(bernoulli_potential(p));
  const double tol = 1e-10;
  std::vector<double> xs;
  for (int i = 0; i < 100; ++i) xs.push_back(i / 99.0);
  std::vector<double> fs;
  for (double x : xs) fs.push_back(staircase_value(ifs, mu, x, tol));
  bool monotone = true;
  for (std::size_t i = 1; i < fs.size(); ++i) monotone = monotone && fs[i] >= fs[i - 1];

  // Gap constancy and additivity over all words up to length 8.
  bool flat = true;
  double add_err = 0.0;
  for (int n = 0; n <= 8; ++n) {
    for (std::uint64_t i = 0; i < checked_word_count(2, n); ++i) {
      const Word w = word_at(2, n, i);
      if (n > 0) {
        const auto c = cylinder(ifs, w);
        const double m = staircase_value(ifs, mu, c.interval.hi, tol) -
                         staircase_value(ifs, mu, c.interval.lo, tol);
        add_err = std::max(add_err, std::abs(m - mu.cylinder(w)));
      }
      Word w0 = w;
      w0.push_back(0);
      Word w1 = w;
      w1.push_back(1);
      const double lo = cylinder(ifs, w0).interval.hi;
      const double hi = cylinder(ifs, w1).interval.lo;
      flat = flat && staircase_value(ifs, mu, lo + 0.25 * (hi - lo), tol) ==
                         staircase_value(ifs, mu, lo + 0.75 * (hi - lo), tol);
    }
  }

  const auto br = staircase_oracle(ifs, p, 25, xs);
  double oracle_err = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double below = br[i].lo - fs[i];
    const double above = fs[i] - br[i].hi;
    oracle_err = std::max({oracle_err, below, above, 0.0});
  }
  return {monotone && flat && add_err <= 2e-10 && oracle_err <= 1e-9,
          std::string(monotone ? "monotone" : "NOT monotone") + (flat ? ", gaps flat" : ", gap NOT flat") +
              fmt2(", additivity err=%.1e, oracle err=%.1e", add_err, oracle_err)};
}

Verdict witness() {
  const oracle::Affine s{{1.0 / 3, 1.0 / 3}, {0.1, 0.9}};
  const auto sys = oracle::make_system(s);
  const HolderAnalysis h(sys, 1.0);
  if (h.regime() != Regime::post_transition) {
    return {false, std::string("system is ") + to_string(h.regime())};
  }
  const auto w = construct_witness(sys, 1.0, {10, 6, 0});
  const double log_b = std::log(w.band);
  bool inside = true;
  for (double d : w.log_diagnostic) inside = inside && std::abs(d) <= log_b + 1e-12;

  const GibbsMeasure mu(sys.psi());
  std::mt19937_64 rng(10);
  const Word coding = mu.sample(w.prefix.size() + 200, rng);
  const auto random = coding_log_diagnostic(sys, 1.0, 0, coding, w.filler_end);
  double worst = 0.0;
  for (double d : random) worst = std::max(worst, std::abs(d));
  return {inside && worst > log_b,
          fmt2("witness band log B=%.3f, random coding max |log D|=%.1f", log_b, worst)};
}

Verdict corollary() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> alpha_d(0.3, 1.5);
  int violations = 0;
  int sandwiched = 0;
  int tracked = 0;
  for (int i = 0; i < 200; ++i) {
    const auto s = oracle::random_two_map(rng);
    const double alpha = alpha_d(rng);
    const auto r = analyze(oracle::make_system(s), alpha);
    for (double d : {r.dim_s0, r.dim_sinf, r.dim_s}) {
      if (d < -1e-9 || d > r.delta + 1e-9) ++violations;
    }
    if (!std::isfinite(r.q0)) continue;
    if (r.q0 < r.vbar) {
      ++sandwiched;
      if (r.dim_s0 > r.dim_s + 1e-9 || r.dim_s > r.dim_sinf + 1e-9) ++violations;
    }
    if (r.vbar <= r.q0 && r.q0 <= 0.0) {
      ++tracked;
      if (std::abs(r.dim_s - r.dim_s0) > 1e-9) ++violations;
    }
    if (r.vbar < 0.0 && 0.0 <= r.q0) {
      ++tracked;
      if (std::abs(r.dim_s - r.dim_sinf) > 1e-9) ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations; " + std::to_string(sandwiched) +
                               " sandwich and " + std::to_string(tracked) + " tracking cases"};
}

}  // namespace

int main() {
  Gate gate;
  gate.run(1, "Darst value", 1, darst);
  gate.run(2, "Ahlfors law", 10, ahlfors_law);
  gate.run(3, "identity suite", 60, identities);
  gate.run(4, "figure regimes", 1, figure_regimes);
  gate.run(5, "phase transition sweep", 5, sweep);
  gate.run(6, "oracle equivalence", 30, oracle_equivalence);
  gate.run(7, "coarse multifractal check", 5, coarse);
  gate.run(8, "case table", 1, case_table);
  gate.run(9, "staircase integrity", 10, staircase);
  gate.run(10, "witness behaviour", 10, witness);
  gate.run(11, "sandwich and tracking", 60, corollary);
  std::printf("%d of 11 criteria failed\n", gate.failures());
  return gate.failures() == 0 ? 0 : 1;
}
