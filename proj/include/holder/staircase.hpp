#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "holder/holder_dimension.hpp"
#include "holder/ifs.hpp"
#include "holder/potential.hpp"

namespace holder {

/// Gibbs (equilibrium) measure of a normalized locally constant potential.
/// Depth 1 is a product measure; depth k is the (k-1)-block Markov chain with
/// stationary law l_u r_u and transitions exp(psi(uj)) r_v / (lambda r_u).
class GibbsMeasure {
 public:
  explicit GibbsMeasure(LocallyConstantPotential psi);

  const LocallyConstantPotential& potential() const { return psi_; }
  int alphabet() const { return psi_.alphabet(); }
  int depth() const { return psi_.depth(); }

  /// Measure of the cylinder [w_1..w_n]; 1 for the empty word.
  double cylinder(std::span<const Symbol> word) const;
  double log_cylinder(std::span<const Symbol> word) const;

  /// mu([w j]) / mu([w]) given the last depth-1 symbols of w (ignored at depth 1).
  /// Requires |w| >= depth - 1.
  double transition(std::span<const Symbol> history, Symbol next) const;

  /// Random coding prefix of length n distributed according to the measure.
  Word sample(std::size_t n, std::mt19937_64& rng) const;

  /// max over level-n words of |log mu(w) - S_n psi(w)|, exponentiated.
  double gibbs_constant(int level) const;

 private:
  double block_probability(std::span<const Symbol> block) const;

  LocallyConstantPotential psi_;
  double log_lambda_ = 0.0;
  std::vector<double> stationary_;
  std::vector<double> right_;
  std::size_t states_ = 1;
};

/// F(x) = mu([seed.lo, x)) by gap-exact descent of the cylinder tree. The
/// returned value is exact when x is a gap point or a cylinder endpoint and
/// otherwise below the true value by less than tol.
double staircase_value(const Ifs& ifs, const GibbsMeasure& mu, double x, double tol = 1e-12);

/// x with the given coding prefix: midpoint of its cylinder.
double coded_point(const Ifs& ifs, const Word& prefix);

struct LocalDimensionSequence {
  /// values[n-1] = S_n psi / S_n phi.
  std::vector<double> values;
  /// Spread (max - min) over the last 10 values.
  double tail_spread = 0.0;
  bool converged = false;
};

LocalDimensionSequence local_dimension_sequence(const LocallyConstantPotential& phi,
                                                const LocallyConstantPotential& psi,
                                                const Word& prefix);

enum class Side { left, right };
enum class Trend { up, down, oscillating };
const char* to_string(Side s);
const char* to_string(Trend t);

struct HolderProbe {
  int depth = 0;
  double r = 0.0;
  double ratio = 0.0;
};

struct HolderRatioSeries {
  double alpha = 0.0;
  Side side = Side::right;
  double x = 0.0;
  std::vector<HolderProbe> probes;
  Trend trend = Trend::oscillating;
  /// last / first ratio over the trend window (last 10 probes).
  double window_factor = 1.0;
  /// last / first ratio over the whole series.
  double overall_factor = 1.0;
  /// max(max ratio, 1 / min ratio).
  double band = 1.0;
  /// Prefix ends in a long run of one symbol (x is close to an endpoint).
  bool eventually_constant = false;
  std::string note;
};

/// Probes at r_n = |X_{x_1..x_n}| for n = 1..probes, ratio = |F(x +- r_n) - F(x)| / r_n^alpha.
/// probes = 0 uses the prefix length.
HolderRatioSeries holder_ratio_series(const Ifs& ifs, const GibbsMeasure& mu, const Word& prefix,
                                      double alpha, Side side, int probes = 0);

using Run = std::pair<Symbol, std::uint64_t>;
std::vector<Run> run_length_encode(const Word& w);
Word run_length_decode(const std::vector<Run>& runs);

struct WitnessPlan {
  std::vector<std::int64_t> n;
  std::vector<std::int64_t> words;  // M_k
  std::vector<std::int64_t> zeros;  // m_k
  std::vector<std::int64_t> target;  // N_k
};

struct WitnessOptions {
  std::int64_t n1 = 10;
  int levels = 6;
  Symbol block_symbol = 0;
};

struct WitnessCoding {
  double alpha = 0.0;
  Symbol block_symbol = 0;
  /// Tilt used for the filler words and its gamma(q1) < alpha.
  double q1 = 0.0;
  double gamma_q1 = 0.0;
  /// Expected chi per symbol under the q1 equilibrium state.
  double slope = 0.0;
  WitnessPlan plan;
  Word prefix;
  /// l_k: prefix length at the end of the k-th filler segment.
  std::vector<std::uint64_t> filler_end;
  /// S_{l_k} chi + m_k psi(block); the diagnostic series is its exponential.
  std::vector<double> log_diagnostic;
  /// max over k of max(D_k, 1 / D_k).
  double band = 1.0;
};

/// n_k = n_1 2^(k-1), M_k = ceil(sqrt(n_k)), N_1 = n_1,
/// N_k = floor(sum_{j<=k} n_j + chi_block sum_{j<k} m_j), m_k = floor(-N_k / psi_block).
/// Throws infeasible_plan when some N_k is not positive or exceeds 2^52.
WitnessPlan witness_plan(double chi_block, double psi_block, const WitnessOptions& opt);

/// Alternates filler segments whose chi-sum tracks N_k with blocks of m_k
/// copies of the block symbol. Depth-1 potentials only.
WitnessCoding construct_witness(const ThermoSystem& sys, double alpha,
                                const WitnessOptions& opt = {});

/// S_{l_k} chi + r_k psi(block) along an arbitrary coding, with r_k the
/// actual run of the block symbol starting after position l_k.
std::vector<double> coding_log_diagnostic(const ThermoSystem& sys, double alpha, Symbol block_symbol,
                                      const Word& coding,
                                      const std::vector<std::uint64_t>& positions);

}  // namespace holder
