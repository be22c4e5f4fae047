#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "holder/error.hpp"
#include "holder/holder_dimension.hpp"
#include "support.hpp"

using namespace holder;

namespace {

const oracle::Affine kThirds{{1.0 / 3, 1.0 / 3}, {0.8, 0.2}};
const oracle::Affine kMiddleThird{{1.0 / 3, 1.0 / 3}, {0.5, 0.5}};

oracle::Affine figure(double p0) { return {{0.2, 0.1}, {p0, 1.0 - p0}}; }

double oracle_spectrum(const oracle::Affine& s, double alpha) {
  const double q0 = oracle::q_of_alpha(s, alpha);
  return oracle::temperature(s, q0) + q0 * alpha;
}

}  // namespace

TEST_CASE("case table examples") {
  const auto mt = oracle::make_system(kMiddleThird);
  const auto c1 = HolderAnalysis(mt, 1.0).level_set_dims();
  CHECK(c1.which == LevelSetCase::gamma_below);
  CHECK(c1.dim_zero == 0.0);
  CHECK(c1.dim_infinite == doctest::Approx(0.6309297536).epsilon(1e-10));

  const auto sys = oracle::make_system(kThirds);
  const double g0 = oracle::gamma(kThirds, 0.0);
  const auto c2 = HolderAnalysis(sys, g0).level_set_dims();
  CHECK(c2.which == LevelSetCase::q0_zero);
  CHECK(c2.dim_zero == doctest::Approx(sys.delta()).epsilon(1e-12));
  CHECK(c2.dim_infinite == doctest::Approx(sys.delta()).epsilon(1e-12));

  const auto c3 = HolderAnalysis(sys, 1.0).level_set_dims();
  CHECK(c3.which == LevelSetCase::q0_negative);
  CHECK(c3.dim_zero == doctest::Approx(oracle_spectrum(kThirds, 1.0)).epsilon(1e-9));
  CHECK(c3.dim_infinite == doctest::Approx(sys.delta()).epsilon(1e-12));

  const auto c4 = HolderAnalysis(sys, 0.5).level_set_dims();
  CHECK(c4.which == LevelSetCase::q0_positive);
  CHECK(c4.dim_zero == doctest::Approx(sys.delta()).epsilon(1e-12));
  CHECK(c4.dim_infinite == doctest::Approx(oracle_spectrum(kThirds, 0.5)).epsilon(1e-9));

  const auto c5 = HolderAnalysis(sys, 0.1).level_set_dims();
  CHECK(c5.which == LevelSetCase::gamma_above);
  CHECK(c5.dim_zero == doctest::Approx(sys.delta()).epsilon(1e-12));
  CHECK(c5.dim_infinite == 0.0);

  const auto half = oracle::make_system({{0.25, 0.25}, {0.5, 0.5}});
  const auto c6 = HolderAnalysis(half, 0.5).level_set_dims();
  CHECK(c6.which == LevelSetCase::unresolved);
  CHECK(std::isnan(c6.dim_zero));
}

TEST_CASE("intersection examples") {
  const auto mt = oracle::make_system(kMiddleThird);
  const HolderAnalysis a(mt, 1.0);
  const double c = std::log(2.0) / std::log(3.0);
  const auto& iv = a.intersections();
  CHECK(iv.v0 == doctest::Approx(-c).epsilon(1e-10));
  CHECK(iv.v1 == doctest::Approx(-c).epsilon(1e-10));
  CHECK(iv.vbar == doctest::Approx(-c).epsilon(1e-10));
  CHECK(mt.beta(iv.vbar, 1.0) == doctest::Approx(c * c).epsilon(1e-10));

  const auto ahl = oracle::make_system(oracle::ahlfors({0.2, 0.1}));
  for (double alpha : {0.4, 0.9, 1.6}) {
    const HolderAnalysis h(ahl, alpha);
    CHECK(h.intersections().vbar == doctest::Approx(-ahl.delta() / alpha).epsilon(1e-10));
  }

  // gamma > alpha everywhere: the line for symbol 0 never meets beta.
  const auto sys = oracle::make_system(kThirds);
  const HolderAnalysis none(sys, 0.1);
  CHECK(std::isinf(none.intersections().v0));
  CHECK(none.intersections().v0 < 0);
  for (double t = -100.0; t <= 0.0; t += 0.5) {
    CHECK(oracle::beta(kThirds, t, 0.1) + t * oracle::ratio(kThirds, 0) > 0.0);
  }
  CHECK(std::isfinite(none.intersections().v1));
}

TEST_CASE("dimension of the Hoelder set examples") {
  const auto mt = oracle::make_system(kMiddleThird);
  const double c = std::log(2.0) / std::log(3.0);
  CHECK(HolderAnalysis(mt, 1.0).dim_s() == doctest::Approx(c * c).epsilon(1e-10));

  std::mt19937_64 rng(41);
  // Ratios below 0.2 keep delta under 0.5, so every sampled alpha exceeds delta.
  std::uniform_real_distribution<double> ad(0.05, 0.2);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = oracle::ahlfors({ad(rng), ad(rng)});
    const auto sys = oracle::make_system(s);
    const double d = sys.delta();
    REQUIRE(d < 0.5);
    for (double alpha : {0.5, 0.7, 1.2}) {
      CHECK(std::abs(HolderAnalysis(sys, alpha).dim_s() - d * d / alpha) < 1e-9);
    }
    // Below delta the constant gamma exceeds alpha.
    CHECK(HolderAnalysis(sys, 0.5 * d).dim_s() == 0.0);
  }

  const auto f3 = oracle::make_system(figure(0.999));
  const HolderAnalysis post(f3, 0.8);
  CHECK(post.regime() == Regime::post_transition);
  CHECK(post.dim_s() == doctest::Approx(oracle_spectrum(figure(0.999), 0.8)).epsilon(1e-9));
  CHECK(post.dim_s() == doctest::Approx(f3.beta(post.q0(), 0.8)).epsilon(1e-10));

  // gamma > alpha everywhere.
  const auto sys = oracle::make_system(kThirds);
  CHECK(HolderAnalysis(sys, 0.1).dim_s() == 0.0);
  CHECK(HolderAnalysis(sys, 0.1).regime() == Regime::degenerate_zero);
}

TEST_CASE("regime examples") {
  CHECK(HolderAnalysis(oracle::make_system(figure(0.8)), 0.8).regime() == Regime::classical);
  CHECK(HolderAnalysis(oracle::make_system(figure(0.89)), 0.8).regime() == Regime::pre_transition);
  CHECK(HolderAnalysis(oracle::make_system(figure(0.999)), 0.8).regime() == Regime::post_transition);
  CHECK(HolderAnalysis(oracle::make_system(kMiddleThird), 1.0).regime() == Regime::ahlfors);
  for (Regime r : {Regime::classical, Regime::pre_transition, Regime::post_transition,
                   Regime::degenerate_zero, Regime::ahlfors}) {
    CHECK(parse_regime(to_string(r)) == r);
  }
  CHECK_FALSE(parse_regime("bogus").has_value());
}

TEST_CASE("classical and pre-transition values are the intersection heights") {
  for (double p0 : {0.8, 0.89}) {
    const auto s = figure(p0);
    const auto sys = oracle::make_system(s);
    const HolderAnalysis h(sys, 0.8);
    const double vbar = h.intersections().vbar;
    CHECK(h.dim_s() == doctest::Approx(oracle::beta(s, vbar, 0.8)).epsilon(1e-9));
    CHECK(h.dim_s() == doctest::Approx(oracle::dim_s_bruteforce(s, 0.8)).epsilon(1e-9));
  }
}

TEST_CASE("phase transition locus examples") {
  const SystemFamily family = [](double p) {
    return oracle::make_system({{1.0 / 3, 1.0 / 3}, {p, 1.0 - p}});
  };
  const auto loci = phase_transition_locus(family, 1.0, 0.01, 0.99);
  REQUIRE(loci.size() == 2);
  CHECK(loci[0] >= 0.15);
  CHECK(loci[0] <= 0.25);
  CHECK(loci[0] + loci[1] == doctest::Approx(1.0).epsilon(1e-9));

  const SystemFamily mirrored = [](double p) {
    return oracle::make_system({{1.0 / 3, 1.0 / 3}, {1.0 - p, p}});
  };
  const auto back = phase_transition_locus(mirrored, 1.0, 0.01, 0.99);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == doctest::Approx(loci[0]).epsilon(1e-9));

  const SystemFamily ahlfors = [](double x) {
    return oracle::make_system({{0.4 * x, 0.4 * x}, {0.5, 0.5}});
  };
  CHECK(phase_transition_locus(ahlfors, 1.0, 0.2, 1.0, 0.05).empty());
}

TEST_CASE("interior symbols are diagnosed but not constrained") {
  // Middle map with a tiny weight makes its line steep.
  const oracle::Affine s{{0.2, 0.2, 0.2}, {0.499, 0.002, 0.499}};
  const auto sys = oracle::make_system(s);
  const HolderAnalysis h(sys, 1.0);
  const auto rep = h.report();
  CHECK(rep.dim_s >= 0.0);
  CHECK(rep.dim_s <= rep.delta + 1e-12);
  const auto hits = h.violated_interior_symbols(-1.0);
  CHECK(hits == std::vector<Symbol>{1});
  CHECK(h.violated_interior_symbols(0.0).empty());
}

TEST_CASE("report fields") {
  const auto sys = oracle::make_system(figure(0.89));
  const auto r = analyze(sys, 0.8);
  CHECK(r.regime == Regime::pre_transition);
  CHECK(r.level_set_case == LevelSetCase::q0_negative);
  CHECK(r.q0 == r.t0);
  CHECK(r.vbar == std::max(r.v0, r.v1));
  CHECK(std::abs(r.dim_s_scan - r.dim_s_closed) < 1e-8);
  CHECK(r.spectrum == doctest::Approx(spectrum_at(sys, 0.8)).epsilon(1e-12));

  const auto c = analyze(oracle::make_system(figure(0.8)), 0.8);
  CHECK(std::isinf(c.q0));
  CHECK(std::isnan(c.spectrum));
  CHECK(c.inversion == InversionStatus::gamma_below);
}

TEST_CASE("property: corollary relations on random two-map systems") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> alpha_d(0.3, 1.5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto s = oracle::random_two_map(rng);
    const double alpha = alpha_d(rng);
    const auto sys = oracle::make_system(s);
    const HolderAnalysis h(sys, alpha);
    CHECK(h.constraint(0.0, 0) > 0.0);
    CHECK(h.constraint(0.0, 1) > 0.0);
    DimensionReport r;
    REQUIRE_NOTHROW(r = h.report());
    CHECK(std::abs(r.dim_s_scan - r.dim_s_closed) < 1e-8);
    for (double d : {r.dim_s0, r.dim_sinf, r.dim_s}) {
      CHECK(d >= 0.0);
      CHECK(d <= r.delta + 1e-12);
    }
    if (std::isfinite(r.q0) && r.q0 < r.vbar) {
      CHECK(r.dim_s0 <= r.dim_s + 1e-9);
      CHECK(r.dim_s <= r.dim_sinf + 1e-9);
    }
    if (std::isfinite(r.q0) && r.vbar <= r.q0 && r.q0 <= 0.0) {
      CHECK(std::abs(r.dim_s - r.dim_s0) < 1e-9);
    }
    if (std::isfinite(r.q0) && r.vbar < 0.0 && 0.0 <= r.q0) {
      CHECK(std::abs(r.dim_s - r.dim_sinf) < 1e-9);
    }
  }
}

TEST_CASE("property: route values match the brute-force constrained minimum") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> alpha_d(0.3, 1.5);
  for (int trial = 0; trial < 4; ++trial) {
    const auto s = oracle::random_two_map(rng);
    const double alpha = alpha_d(rng);
    const auto sys = oracle::make_system(s);
    const double got = HolderAnalysis(sys, alpha).dim_s();
    CHECK(got == doctest::Approx(oracle::dim_s_bruteforce(s, alpha)).epsilon(1e-8));
  }
}
