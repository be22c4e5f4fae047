#pragma once

#include <vector>

#include "holder/potential.hpp"
#include "holder/root_finding.hpp"

namespace holder {

enum class PressureMethod { spectral, cylinder_sum };

struct PressureQuery {
  LocallyConstantPotential potential;
  PressureMethod method = PressureMethod::spectral;
  /// First level n used by the cylinder-sum method (n, n+1, n+2 are extrapolated).
  int level = 12;
  unsigned workers = 1;
};

/// Leading eigendata of the transfer matrix on (k-1)-blocks,
/// M[u -> v] = exp(value on the overlap word). Vectors are positive,
/// normalised so that sum(left[i] * right[i]) = 1.
struct PerronData {
  double log_lambda = 0.0;
  std::vector<double> left;
  std::vector<double> right;
};

PerronData perron(const LocallyConstantPotential& pot, bool with_vectors = true);

/// Topological pressure via the spectral radius (exact for locally constant potentials).
double pressure(const LocallyConstantPotential& pot);
double pressure(const PotentialCombo& combo);
double pressure(const PressureQuery& query);

/// log sum over words of length n of exp(S_n f), padded Birkhoff sums,
/// reduced with a worker-count invariant pairwise tree.
double log_partition_sum(const LocallyConstantPotential& pot, int n, unsigned workers = 1);

struct GammaEstimate {
  double gibbs = 0.0;
  double finite_difference = 0.0;
};

struct GammaRange {
  double min = 0.0;
  double max = 0.0;
  /// True when taken from per-symbol ratios (depth 1), false when estimated
  /// from gamma(+-t_max).
  bool exact = false;
};

/// The pair (phi, psi) of a geometric and a normalized potential together
/// with the implicit functions built from P(s phi + q psi).
class ThermoSystem {
 public:
  ThermoSystem(LocallyConstantPotential phi, LocallyConstantPotential psi,
               SolverConfig cfg = {});

  const LocallyConstantPotential& phi() const { return phi_; }
  const LocallyConstantPotential& psi() const { return psi_; }
  const SolverConfig& config() const { return cfg_; }
  int alphabet() const { return phi_.alphabet(); }
  int depth() const { return phi_.depth(); }

  /// P(s phi + q psi).
  double pressure(double s, double q) const;

  /// Root of P(s phi) = 0.
  double delta() const { return delta_; }
  /// T(q): root in s of P(s phi + q psi) = 0.
  double temperature(double q) const;
  /// beta(t): root in s of P((s - alpha t) phi + t psi) = 0, solved directly.
  double beta(double t, double alpha) const;
  /// As beta(t, alpha), with the bracket search started from `guess`.
  double beta(double t, double alpha, double guess) const;

  /// -T'(q) as the ratio of equilibrium-state expectations of psi and phi.
  double gamma_gibbs(double q) const;
  /// -T'(q) by central difference of temperature().
  double gamma_fd(double q) const;
  /// Both estimates; throws numerical_inconsistency if they disagree.
  GammaEstimate gamma(double q) const;

  /// psi(i i i...) / phi(i i i...).
  double fixed_point_ratio(Symbol i) const;
  /// Ahlfors case: psi / phi constant over depth-k words (sample variance < 1e-12).
  bool is_ahlfors() const { return ahlfors_; }
  double ratio_variance() const { return ratio_variance_; }
  GammaRange gamma_range() const;

  /// Equilibrium weights of T(q) phi + q psi on depth-k words (sum to 1).
  std::vector<double> equilibrium_state(double q) const {
    return equilibrium_weights(temperature(q), q);
  }

 private:
  double solve_s(double q, double shift, double guess, double step) const;
  /// Equilibrium weights of s phi + q psi on depth-k words.
  std::vector<double> equilibrium_weights(double s, double q) const;

  LocallyConstantPotential phi_;
  LocallyConstantPotential psi_;
  SolverConfig cfg_;
  double delta_ = 0.0;
  double ratio_variance_ = 0.0;
  bool ahlfors_ = false;
};

/// Root of P(s phi) = 0 for a strictly negative phi.
double bowen_dimension(const LocallyConstantPotential& phi, const SolverConfig& cfg = {});
double bowen_dimension(const Ifs& ifs, int depth = 1, const SolverConfig& cfg = {});

}  // namespace holder
