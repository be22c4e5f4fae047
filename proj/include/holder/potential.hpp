#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "holder/ifs.hpp"

namespace holder {

/// Potential on coding space that depends on the first `depth` symbols only.
/// values()[index_of(w)] is the value on the cylinder [w_1..w_depth], with
/// w_1 the most significant digit of the index.
class LocallyConstantPotential {
 public:
  LocallyConstantPotential(int alphabet, int depth, std::vector<double> values);

  int alphabet() const { return alphabet_; }
  int depth() const { return depth_; }
  std::size_t table_size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

  double value(std::size_t index) const { return values_[index]; }
  /// Value on a window of exactly depth() symbols.
  double at(std::span<const Symbol> window) const;
  std::size_t index_of(std::span<const Symbol> window) const;

  bool is_geometric() const { return geometric_; }
  bool is_normalized() const { return normalized_; }
  LocallyConstantPotential& mark_geometric(bool v = true) { geometric_ = v; return *this; }
  LocallyConstantPotential& mark_normalized(bool v = true) { normalized_ = v; return *this; }

  double min_value() const;
  double max_value() const;

  /// Same function re-tabulated at a larger depth (value depends on the prefix).
  LocallyConstantPotential lifted(int depth) const;
  LocallyConstantPotential shifted(double c) const;

 private:
  int alphabet_;
  int depth_;
  std::vector<double> values_;
  bool geometric_ = false;
  bool normalized_ = false;
};

/// c_phi * phi + c_psi * psi, evaluated on a common depth.
struct PotentialCombo {
  double c_phi = 0.0;
  double c_psi = 1.0;
  LocallyConstantPotential phi;
  LocallyConstantPotential psi;

  PotentialCombo(double c_phi, double c_psi, LocallyConstantPotential phi,
                 LocallyConstantPotential psi);

  int depth() const;
  LocallyConstantPotential materialize() const;
};

/// log f_j' tabulated at the given depth. Affine maps give the exact table
/// log a_{w_1}; generic maps use the midpoint of the cylinder X_{w_2..w_k} as
/// the anchor point.
LocallyConstantPotential geometric_potential(const Ifs& ifs, int depth = 1);

/// Depth-1 table log p_j. Weights must sum to 1 within 1e-12 unless
/// auto_normalize is set, in which case they are rescaled first.
LocallyConstantPotential bernoulli_potential(const std::vector<double>& weights,
                                             bool auto_normalize = false);

struct NormalizeOutcome {
  LocallyConstantPotential potential;
  /// Set when the shifted potential is not strictly negative.
  std::optional<std::string> warning;
};

/// Shift by -pressure so that the result has zero pressure.
NormalizeOutcome normalize(const LocallyConstantPotential& raw, double pressure);

/// Running Birkhoff sums along a coding prefix: sums[k] = S_k f for k = 0..n.
/// Windows that run past the end of the word are padded with symbol 0.
std::vector<double> birkhoff_prefix_sums(const LocallyConstantPotential& pot,
                                         std::span<const Symbol> word);

double birkhoff_sum(const LocallyConstantPotential& pot, std::span<const Symbol> word);
double birkhoff_sum(const PotentialCombo& combo, std::span<const Symbol> word);

/// Value on the constant coding i i i ...
double fixed_point_value(const LocallyConstantPotential& pot, Symbol i);

/// chi = psi - alpha * phi.
PotentialCombo chi(const LocallyConstantPotential& psi,
                   const LocallyConstantPotential& phi, double alpha);

/// Largest k >= 1 along the prefix with S_k chi < t; nullopt when no k
/// qualifies or when S_k chi stays below t forever (non-positive chi).
/// Throws insufficient_prefix when the prefix ends before this is decided.
std::optional<std::size_t> stopping_time(const PotentialCombo& combo,
                                         std::span<const Symbol> prefix, double t);

/// max over level-n words of exp|log(|X_w|/|X|) - S_n phi(w)|; 1 for affine systems.
double distortion_constant(const Ifs& ifs, const LocallyConstantPotential& phi, int level);

}  // namespace holder
