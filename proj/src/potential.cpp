#include "holder/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "holder/error.hpp"

namespace holder {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

}  // namespace

LocallyConstantPotential::LocallyConstantPotential(int alphabet, int depth,
                                                   std::vector<double> values)
    : alphabet_(alphabet), depth_(depth), values_(std::move(values)) {
  if (alphabet < 1) throw Error(ErrorKind::invalid_argument, "potential needs a non-empty alphabet");
  if (depth < 1) throw Error(ErrorKind::invalid_argument, "potential depth must be >= 1");
  if (values_.size() != ipow(alphabet, depth)) {
    std::ostringstream os;
    os << "potential table has " << values_.size() << " entries, expected "
       << ipow(alphabet, depth);
    throw Error(ErrorKind::invalid_argument, os.str());
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "potential values must be finite");
  }
}

std::size_t LocallyConstantPotential::index_of(std::span<const Symbol> window) const {
  std::size_t idx = 0;
  for (Symbol s : window) idx = idx * static_cast<std::size_t>(alphabet_) + static_cast<std::size_t>(s);
  return idx;
}

double LocallyConstantPotential::at(std::span<const Symbol> window) const {
  if (static_cast<int>(window.size()) != depth_) {
    throw Error(ErrorKind::invalid_argument, "window length must equal potential depth");
  }
  return values_[index_of(window)];
}

double LocallyConstantPotential::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double LocallyConstantPotential::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

LocallyConstantPotential LocallyConstantPotential::lifted(int depth) const {
  if (depth < depth_) throw Error(ErrorKind::invalid_argument, "cannot lift to a smaller depth");
  if (depth == depth_) return *this;
  const std::size_t tail = ipow(alphabet_, depth - depth_);
  std::vector<double> v(values_.size() * tail);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i / tail];
  LocallyConstantPotential out(alphabet_, depth, std::move(v));
  out.geometric_ = geometric_;
  out.normalized_ = normalized_;
  return out;
}

LocallyConstantPotential LocallyConstantPotential::shifted(double c) const {
  std::vector<double> v = values_;
  for (double& x : v) x += c;
  return LocallyConstantPotential(alphabet_, depth_, std::move(v));
}

PotentialCombo::PotentialCombo(double cphi, double cpsi, LocallyConstantPotential p,
                               LocallyConstantPotential q)
    : c_phi(cphi), c_psi(cpsi), phi(std::move(p)), psi(std::move(q)) {
  if (phi.alphabet() != psi.alphabet()) {
    throw Error(ErrorKind::invalid_argument, "potentials are over different alphabets");
  }
}

int PotentialCombo::depth() const { return std::max(phi.depth(), psi.depth()); }

LocallyConstantPotential PotentialCombo::materialize() const {
  const int k = depth();
  const auto a = phi.lifted(k);
  const auto b = psi.lifted(k);
  std::vector<double> v(a.table_size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c_phi * a.value(i) + c_psi * b.value(i);
  return LocallyConstantPotential(a.alphabet(), k, std::move(v));
}

LocallyConstantPotential geometric_potential(const Ifs& ifs, int depth) {
  if (depth < 1) throw Error(ErrorKind::invalid_argument, "depth must be >= 1");
  const int m = ifs.size();
  if (ifs.all_affine()) {
    std::vector<double> v(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) v[j] = std::log(ifs.map(j).affine().ratio);
    auto pot = LocallyConstantPotential(m, 1, std::move(v)).lifted(depth);
    pot.mark_geometric();
    return pot;
  }
  const std::size_t n = ipow(m, depth);
  std::vector<double> v(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const Word w = word_at(m, depth, idx);
    const Word tail(w.begin() + 1, w.end());
    const double anchor = ifs.apply_word(tail, ifs.seed()).midpoint();
    const double d = ifs.map(w[0]).derivative(anchor);
    if (!(d > 0.0) || !(d < 1.0)) {
      throw Error(ErrorKind::invalid_map,
                  "derivative of map " + std::to_string(w[0]) +
                      " is not in (0, 1) at the anchor of " + word_to_string(w));
    }
    v[idx] = std::log(d);
  }
  LocallyConstantPotential pot(m, depth, std::move(v));
  pot.mark_geometric();
  return pot;
}

LocallyConstantPotential bernoulli_potential(const std::vector<double>& weights,
                                             bool auto_normalize) {
  if (weights.empty()) throw Error(ErrorKind::invalid_argument, "no weights given");
  double sum = 0.0;
  for (double p : weights) {
    if (!(p > 0.0)) throw Error(ErrorKind::normalization, "weights must be strictly positive");
    sum += p;
  }
  if (!auto_normalize && std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "weights sum to " << sum << ", not 1";
    throw Error(ErrorKind::normalization, os.str());
  }
  std::vector<double> v(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) {
    v[j] = std::log(auto_normalize ? weights[j] / sum : weights[j]);
  }
  LocallyConstantPotential pot(static_cast<int>(weights.size()), 1, std::move(v));
  pot.mark_normalized();
  return pot;
}

NormalizeOutcome normalize(const LocallyConstantPotential& raw, double pressure) {
  NormalizeOutcome out{raw.shifted(-pressure), std::nullopt};
  out.potential.mark_normalized();
  if (!(out.potential.max_value() < 0.0)) {
    std::ostringstream os;
    os << "normalized potential is not strictly negative (max value "
       << out.potential.max_value() << ")";
    out.warning = os.str();
  }
  return out;
}

std::vector<double> birkhoff_prefix_sums(const LocallyConstantPotential& pot,
                                         std::span<const Symbol> word) {
  const std::size_t n = word.size();
  const std::size_t k = static_cast<std::size_t>(pot.depth());
  const std::size_t m = static_cast<std::size_t>(pot.alphabet());
  std::vector<double> sums(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t pos = i + j;
      idx = idx * m + (pos < n ? static_cast<std::size_t>(word[pos]) : 0);
    }
    sums[i + 1] = sums[i] + pot.value(idx);
  }
  return sums;
}

double birkhoff_sum(const LocallyConstantPotential& pot, std::span<const Symbol> word) {
  if (pot.depth() == 1) {
    double s = 0.0;
    for (Symbol x : word) s += pot.value(static_cast<std::size_t>(x));
    return s;
  }
  return birkhoff_prefix_sums(pot, word).back();
}

double birkhoff_sum(const PotentialCombo& combo, std::span<const Symbol> word) {
  return combo.c_phi * birkhoff_sum(combo.phi, word) +
         combo.c_psi * birkhoff_sum(combo.psi, word);
}

double fixed_point_value(const LocallyConstantPotential& pot, Symbol i) {
  if (i < 0 || i >= pot.alphabet()) throw Error(ErrorKind::invalid_argument, "symbol outside alphabet");
  const Word w(static_cast<std::size_t>(pot.depth()), i);
  return pot.at(w);
}

PotentialCombo chi(const LocallyConstantPotential& psi,
                   const LocallyConstantPotential& phi, double alpha) {
  return PotentialCombo(-alpha, 1.0, phi, psi);
}

std::optional<std::size_t> stopping_time(const PotentialCombo& combo,
                                         std::span<const Symbol> prefix, double t) {
  if (prefix.empty()) throw Error(ErrorKind::insufficient_prefix, "empty coding prefix");
  const auto pot = combo.materialize();
  const auto sums = birkhoff_prefix_sums(pot, prefix);
  const std::size_t n = prefix.size();
  if (sums[n] < t) {
    const bool non_positive = pot.max_value() <= 0.0;
    if (non_positive) return std::nullopt;
    throw Error(ErrorKind::insufficient_prefix,
                "Birkhoff sum has not reached the threshold within the prefix");
  }
  for (std::size_t k = n; k >= 1; --k) {
    if (sums[k] < t) return k;
  }
  return std::nullopt;
}

double distortion_constant(const Ifs& ifs, const LocallyConstantPotential& phi, int level) {
  const double seed_len = ifs.seed().length();
  double worst = 0.0;
  enumerate_cylinders(ifs, level).for_each([&](const CylinderRecord& c) {
    const double dev = std::abs(std::log(c.diameter / seed_len) - birkhoff_sum(phi, c.word));
    worst = std::max(worst, dev);
  });
  return std::exp(worst);
}

}  // namespace holder
