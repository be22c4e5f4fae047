#pragma once

// Brute-force reference computations. They share no code path with the
// spectral solvers beyond the potential tables themselves.

#include <cstdint>
#include <functional>
#include <vector>

#include "holder/ifs.hpp"
#include "holder/potential.hpp"

namespace holder {

/// (1/n) log sum over all level-n words of exp(S_n f), with the same
/// zero-padding rule as birkhoff_sum for the last windows.
double pressure_direct(const LocallyConstantPotential& pot, int n, unsigned workers = 1);

struct SpectrumBin {
  double center = 0.0;
  double half_width = 0.05;
};

struct CoarseSpectrumBin {
  double center = 0.0;
  double half_width = 0.0;
  int level = 0;
  /// Level-n words with S_n psi / S_n phi in [center - half_width, center + half_width).
  std::uint64_t count = 0;
  /// Mean of exp(S_n phi) over the counted words.
  double mean_diameter = 0.0;
  /// log count / -log mean_diameter; NaN for empty bins.
  double estimate = 0.0;
};

enum class CountingMethod { automatic, enumerate, binomial };

/// Coarse multifractal counts. automatic uses binomial counting for
/// two-symbol depth-1 pairs and enumeration otherwise.
std::vector<CoarseSpectrumBin> coarse_spectrum(const LocallyConstantPotential& psi,
                                               const LocallyConstantPotential& phi,
                                               const std::vector<SpectrumBin>& bins, int n,
                                               CountingMethod method = CountingMethod::automatic,
                                               unsigned workers = 1);

/// (f(x + h) - f(x - h)) / (2h).
double fd_derivative(const std::function<double(double)>& f, double x, double h);

struct StaircaseBracket {
  /// Mass of depth-n cylinders lying entirely left of x.
  double lo = 0.0;
  /// lo plus the mass of the depth-n cylinder containing x, if any.
  double hi = 0.0;
};

/// Brackets for F(x) from every depth-n cylinder of an affine system with
/// Bernoulli weights, streamed left to right in one pass.
std::vector<StaircaseBracket> staircase_oracle(const Ifs& ifs, const std::vector<double>& weights,
                                               int depth, const std::vector<double>& xs);

}  // namespace holder
