#include "holder/staircase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "holder/error.hpp"
#include "holder/pressure.hpp"

namespace holder {

namespace {

std::size_t block_index(std::span<const Symbol> block, int alphabet) {
  std::size_t idx = 0;
  for (Symbol s : block) idx = idx * static_cast<std::size_t>(alphabet) + static_cast<std::size_t>(s);
  return idx;
}

}  // namespace

GibbsMeasure::GibbsMeasure(LocallyConstantPotential psi) : psi_(std::move(psi)) {
  const PerronData pd = perron(psi_, true);
  log_lambda_ = pd.log_lambda;
  states_ = pd.right.size();
  right_ = pd.right;
  stationary_.resize(states_);
  for (std::size_t u = 0; u < states_; ++u) stationary_[u] = pd.left[u] * pd.right[u];
}

double GibbsMeasure::block_probability(std::span<const Symbol> block) const {
  const int k1 = depth() - 1;
  const auto n = static_cast<int>(block.size());
  std::size_t width = 1;
  for (int i = n; i < k1; ++i) width *= static_cast<std::size_t>(alphabet());
  const std::size_t first = block_index(block, alphabet()) * width;
  double p = 0.0;
  for (std::size_t u = first; u < first + width; ++u) p += stationary_[u];
  return p;
}

double GibbsMeasure::transition(std::span<const Symbol> history, Symbol next) const {
  const int k1 = depth() - 1;
  const auto m = static_cast<std::size_t>(alphabet());
  const std::size_t u =
      k1 == 0 ? 0 : block_index(history.subspan(history.size() - static_cast<std::size_t>(k1)), alphabet());
  const std::size_t w = u * m + static_cast<std::size_t>(next);
  const std::size_t v = w % states_;
  return std::exp(psi_.value(w) - log_lambda_) * right_[v] / right_[u];
}

double GibbsMeasure::log_cylinder(std::span<const Symbol> word) const {
  const auto k1 = static_cast<std::size_t>(depth() - 1);
  if (word.size() <= k1) return std::log(block_probability(word));
  double lp = std::log(block_probability(word.first(k1)));
  for (std::size_t i = k1; i < word.size(); ++i) {
    lp += std::log(transition(word.first(i), word[i]));
  }
  return lp;
}

double GibbsMeasure::cylinder(std::span<const Symbol> word) const {
  if (word.empty()) return 1.0;
  return std::exp(log_cylinder(word));
}

Word GibbsMeasure::sample(std::size_t n, std::mt19937_64& rng) const {
  const auto k1 = static_cast<std::size_t>(depth() - 1);
  Word w;
  w.reserve(std::max(n, k1));
  if (k1 > 0) {
    std::discrete_distribution<std::size_t> start(stationary_.begin(), stationary_.end());
    std::size_t u = start(rng);
    Word block(k1);
    for (std::size_t i = k1; i-- > 0;) {
      block[i] = static_cast<Symbol>(u % static_cast<std::size_t>(alphabet()));
      u /= static_cast<std::size_t>(alphabet());
    }
    w = block;
  }
  std::vector<double> probs(static_cast<std::size_t>(alphabet()));
  while (w.size() < n) {
    for (Symbol j = 0; j < alphabet(); ++j) probs[static_cast<std::size_t>(j)] = transition(w, j);
    std::discrete_distribution<int> step(probs.begin(), probs.end());
    w.push_back(step(rng));
  }
  w.resize(n);
  return w;
}

double GibbsMeasure::gibbs_constant(int level) const {
  const std::uint64_t count = checked_word_count(alphabet(), level);
  double worst = 0.0;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    const Word w = word_at(alphabet(), level, idx);
    worst = std::max(worst, std::abs(log_cylinder(w) - birkhoff_sum(psi_, w)));
  }
  return std::exp(worst);
}

double staircase_value(const Ifs& ifs, const GibbsMeasure& mu, double x, double tol) {
  const Interval seed = ifs.seed();
  if (x <= seed.lo) return 0.0;
  if (x >= seed.hi) return 1.0;
  const auto k1 = static_cast<std::size_t>(mu.depth() - 1);
  const bool affine = ifs.all_affine();
  // Points this close to a cylinder endpoint count as the endpoint itself, so
  // endpoints recomputed along a different arithmetic path give the same F.
  const double snap = 8.0 * std::numeric_limits<double>::epsilon() *
                      std::max(std::abs(seed.lo), std::abs(seed.hi));
  Word w;
  double acc = 0.0;
  double mass = 1.0;
  // Composite affine map f_w(y) = scale * y + shift.
  double scale = 1.0;
  double shift = 0.0;
  while (true) {
    bool entered = false;
    for (Symbol j = 0; j < ifs.size(); ++j) {
      Interval child;
      double child_scale = 0.0;
      double child_shift = 0.0;
      w.push_back(j);
      if (affine) {
        const AffineMap& f = ifs.map(j).affine();
        child_scale = scale * f.ratio;
        child_shift = scale * f.offset + shift;
        child = {child_scale * seed.lo + child_shift, child_scale * seed.hi + child_shift};
      } else {
        child = ifs.apply_word(w, seed);
      }
      const double child_mass =
          w.size() > k1 ? mass * mu.transition(std::span<const Symbol>(w).first(w.size() - 1), j)
                        : mu.cylinder(w);
      if (x <= child.lo + snap) return acc;
      if (x >= child.hi - snap) {
        acc += child_mass;
        w.pop_back();
        continue;
      }
      if (child_mass < tol) return acc;
      mass = child_mass;
      scale = child_scale;
      shift = child_shift;
      entered = true;
      break;
    }
    if (!entered) return acc;
  }
}

double coded_point(const Ifs& ifs, const Word& prefix) {
  return cylinder(ifs, prefix).interval.midpoint();
}

LocalDimensionSequence local_dimension_sequence(const LocallyConstantPotential& phi,
                                                const LocallyConstantPotential& psi,
                                                const Word& prefix) {
  LocalDimensionSequence out;
  const auto sp = birkhoff_prefix_sums(psi, prefix);
  const auto sf = birkhoff_prefix_sums(phi, prefix);
  for (std::size_t n = 1; n < sp.size(); ++n) out.values.push_back(sp[n] / sf[n]);
  if (out.values.empty()) return out;
  const std::size_t window = std::min<std::size_t>(10, out.values.size());
  const auto tail = out.values.end() - static_cast<std::ptrdiff_t>(window);
  const auto [lo, hi] = std::minmax_element(tail, out.values.end());
  out.tail_spread = *hi - *lo;
  out.converged = out.tail_spread < 1e-3;
  return out;
}

const char* to_string(Side s) { return s == Side::left ? "left" : "right"; }

const char* to_string(Trend t) {
  switch (t) {
    case Trend::up: return "up";
    case Trend::down: return "down";
    case Trend::oscillating: return "oscillating";
  }
  return "unknown";
}

namespace {

double growth(double first, double last) {
  if (first > 0.0) return last / first;
  return last > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

}  // namespace

HolderRatioSeries holder_ratio_series(const Ifs& ifs, const GibbsMeasure& mu, const Word& prefix,
                                      double alpha, Side side, int probes) {
  if (probes <= 0) probes = static_cast<int>(prefix.size());
  if (prefix.empty() || static_cast<std::size_t>(probes) > prefix.size()) {
    throw Error(ErrorKind::insufficient_prefix, "coding prefix is shorter than the probe count");
  }
  HolderRatioSeries out;
  out.alpha = alpha;
  out.side = side;
  out.x = coded_point(ifs, prefix);
  const Interval seed = ifs.seed();
  for (int n = 1; n <= probes; ++n) {
    const Word head(prefix.begin(), prefix.begin() + n);
    const CylinderRecord cyl = cylinder(ifs, head);
    const double tol = 1e-3 * mu.cylinder(head);
    const double r = cyl.diameter;
    const double y = std::clamp(side == Side::right ? out.x + r : out.x - r, seed.lo, seed.hi);
    const double fx = staircase_value(ifs, mu, out.x, tol);
    const double fy = staircase_value(ifs, mu, y, tol);
    out.probes.push_back({n, r, std::abs(fy - fx) / std::pow(r, alpha)});
  }
  const std::size_t window = std::min<std::size_t>(10, out.probes.size());
  out.window_factor = growth(out.probes[out.probes.size() - window].ratio, out.probes.back().ratio);
  out.overall_factor = growth(out.probes.front().ratio, out.probes.back().ratio);
  if (out.window_factor >= 10.0) {
    out.trend = Trend::up;
  } else if (out.window_factor <= 0.1) {
    out.trend = Trend::down;
  } else {
    out.trend = Trend::oscillating;
  }
  for (const auto& p : out.probes) {
    if (p.ratio > 0.0) out.band = std::max({out.band, p.ratio, 1.0 / p.ratio});
  }
  std::size_t run = 1;
  while (run < prefix.size() && prefix[prefix.size() - 1 - run] == prefix.back()) ++run;
  out.eventually_constant = run >= std::max<std::size_t>(10, prefix.size() / 2);
  if (out.eventually_constant) {
    out.note = "prefix ends in a run of " + std::to_string(run) + " copies of symbol " +
               std::to_string(prefix.back()) + "; x is close to a cylinder endpoint";
  }
  return out;
}

std::vector<Run> run_length_encode(const Word& w) {
  std::vector<Run> runs;
  for (Symbol s : w) {
    if (!runs.empty() && runs.back().first == s) {
      ++runs.back().second;
    } else {
      runs.emplace_back(s, 1);
    }
  }
  return runs;
}

Word run_length_decode(const std::vector<Run>& runs) {
  Word w;
  for (const auto& [s, n] : runs) w.insert(w.end(), n, s);
  return w;
}

WitnessPlan witness_plan(double chi_block, double psi_block, const WitnessOptions& opt) {
  if (!(psi_block < 0.0)) {
    throw Error(ErrorKind::invalid_argument, "psi must be negative on the block symbol");
  }
  if (opt.n1 < 1 || opt.levels < 1) {
    throw Error(ErrorKind::invalid_argument, "witness plan needs n1 >= 1 and levels >= 1");
  }
  constexpr double kMaxTarget = 4503599627370496.0;  // 2^52
  WitnessPlan plan;
  double sum_n = 0.0;
  double sum_m = 0.0;
  for (int k = 1; k <= opt.levels; ++k) {
    const double nk = static_cast<double>(opt.n1) * std::ldexp(1.0, k - 1);
    sum_n += nk;
    const double target = k == 1 ? nk : std::floor(sum_n + chi_block * sum_m);
    if (!(target > 0.0) || target > kMaxTarget || nk > kMaxTarget) {
      throw Error(ErrorKind::infeasible_plan,
                  "chi-sum target N_" + std::to_string(k) + " is not a positive integer in range");
    }
    const double mk = std::floor(-target / psi_block);
    plan.n.push_back(static_cast<std::int64_t>(nk));
    plan.words.push_back(static_cast<std::int64_t>(std::ceil(std::sqrt(nk))));
    plan.target.push_back(static_cast<std::int64_t>(target));
    plan.zeros.push_back(static_cast<std::int64_t>(mk));
    sum_m += mk;
  }
  return plan;
}

namespace {

/// Deterministic sequence whose symbol frequencies follow `weights`:
/// each step emits the symbol with the largest deficit.
class BalancedSource {
 public:
  explicit BalancedSource(std::vector<double> weights)
      : weights_(std::move(weights)), counts_(weights_.size(), 0.0) {}

  Symbol next() {
    ++emitted_;
    std::size_t best = 0;
    double best_deficit = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < weights_.size(); ++j) {
      const double d = emitted_ * weights_[j] - counts_[j];
      if (d > best_deficit) {
        best_deficit = d;
        best = j;
      }
    }
    counts_[best] += 1.0;
    return static_cast<Symbol>(best);
  }

 private:
  std::vector<double> weights_;
  std::vector<double> counts_;
  double emitted_ = 0.0;
};

}  // namespace

namespace {

// Below this chi drift per symbol (e.g. chi == 0 up to rounding) fillers
// cannot steer the running sum, so words keep their nominal length.
constexpr double kMinSlope = 1e-9;

}  // namespace

WitnessCoding construct_witness(const ThermoSystem& sys, double alpha, const WitnessOptions& opt) {
  if (sys.depth() != 1) {
    throw Error(ErrorKind::invalid_argument, "witness construction needs depth-1 potentials");
  }
  const int m = sys.alphabet();
  if (opt.block_symbol < 0 || opt.block_symbol >= m) {
    throw Error(ErrorKind::invalid_argument, "block symbol outside the alphabet");
  }
  const HolderAnalysis analysis(sys, alpha);
  if (analysis.regime() == Regime::degenerate_zero) {
    throw Error(ErrorKind::infeasible_plan, "gamma exceeds alpha everywhere; nothing to witness");
  }
  WitnessCoding out;
  out.alpha = alpha;
  out.block_symbol = opt.block_symbol;

  std::vector<double> chi(static_cast<std::size_t>(m));
  for (Symbol j = 0; j < m; ++j) {
    chi[static_cast<std::size_t>(j)] = sys.psi().value(static_cast<std::size_t>(j)) -
                                       alpha * sys.phi().value(static_cast<std::size_t>(j));
  }
  const double psi_block = sys.psi().value(static_cast<std::size_t>(opt.block_symbol));
  const double chi_block = chi[static_cast<std::size_t>(opt.block_symbol)];

  if (analysis.inversion().status == InversionStatus::degenerate_equal) {
    out.q1 = 0.0;
  } else {
    const double t_star = std::max(analysis.intersections().vbar, analysis.q0());
    if (!std::isfinite(t_star)) {
      throw Error(ErrorKind::infeasible_plan, "no finite tilt attains the dimension");
    }
    out.q1 = t_star;
    if (sys.gamma_gibbs(out.q1) >= alpha - 1e-6) out.q1 = t_star + 1.0;
  }
  out.gamma_q1 = sys.gamma_gibbs(out.q1);
  const std::vector<double> weights = sys.equilibrium_state(out.q1);
  out.slope = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) out.slope += weights[j] * chi[j];

  out.plan = witness_plan(chi_block, psi_block, opt);

  // Tail symbols: the most positive and most negative chi.
  const auto pos = static_cast<Symbol>(std::max_element(chi.begin(), chi.end()) - chi.begin());
  const auto neg = static_cast<Symbol>(std::min_element(chi.begin(), chi.end()) - chi.begin());
  const double chi_pos = chi[static_cast<std::size_t>(pos)];
  const double chi_neg = chi[static_cast<std::size_t>(neg)];

  BalancedSource source(weights);
  double sum = 0.0;
  double log_band = 0.0;
  const auto emit = [&](Symbol s) {
    out.prefix.push_back(s);
    sum += chi[static_cast<std::size_t>(s)];
  };
  for (std::size_t k = 0; k < out.plan.n.size(); ++k) {
    const double target = static_cast<double>(out.plan.target[k]);
    const double per_word = static_cast<double>(out.plan.n[k]) /
                            static_cast<double>(out.plan.words[k]);
    const bool tracks = out.slope > kMinSlope;
    const auto word_len = static_cast<std::int64_t>(
        std::ceil(tracks ? per_word / out.slope : per_word));
    for (std::int64_t i = 0; i + 1 < out.plan.words[k]; ++i) {
      for (std::int64_t s = 0; s < word_len; ++s) emit(source.next());
    }
    // Last word: run until the chi-sum reaches N_k, then trim the error with a short tail.
    if (tracks) {
      const std::int64_t cap = 4 * word_len + 64;
      for (std::int64_t s = 0; s < cap && sum < target; ++s) emit(source.next());
      const double err = sum - target;
      int best_pos = 0;
      int best_neg = 0;
      double best = std::abs(err);
      for (int cn = 0; cn <= 64 && best >= 0.5; ++cn) {
        for (int cp = 0; cp <= 64; ++cp) {
          const double e = std::abs(err + cp * chi_pos + cn * chi_neg);
          if (e < best - 1e-15) {
            best = e;
            best_pos = cp;
            best_neg = cn;
            if (best < 0.5) break;
          }
        }
      }
      for (int i = 0; i < best_neg; ++i) emit(neg);
      for (int i = 0; i < best_pos; ++i) emit(pos);
    } else {
      for (std::int64_t s = 0; s < word_len; ++s) emit(source.next());
    }
    out.filler_end.push_back(out.prefix.size());
    const double log_d = sum + static_cast<double>(out.plan.zeros[k]) * psi_block;
    out.log_diagnostic.push_back(log_d);
    log_band = std::max(log_band, std::abs(log_d));
    for (std::int64_t z = 0; z < out.plan.zeros[k]; ++z) emit(opt.block_symbol);
  }
  out.band = std::exp(log_band);
  return out;
}

std::vector<double> coding_log_diagnostic(const ThermoSystem& sys, double alpha,
                                          Symbol block_symbol, const Word& coding,
                                          const std::vector<std::uint64_t>& positions) {
  if (sys.depth() != 1) {
    throw Error(ErrorKind::invalid_argument, "coding diagnostic needs depth-1 potentials");
  }
  const double psi_block = sys.psi().value(static_cast<std::size_t>(block_symbol));
  std::vector<double> out;
  double sum = 0.0;
  std::size_t i = 0;
  for (std::uint64_t l : positions) {
    if (l > coding.size()) {
      throw Error(ErrorKind::insufficient_prefix, "coding is shorter than a diagnostic position");
    }
    for (; i < l; ++i) {
      const auto s = static_cast<std::size_t>(coding[i]);
      sum += sys.psi().value(s) - alpha * sys.phi().value(s);
    }
    std::size_t run = 0;
    while (l + run < coding.size() && coding[l + run] == block_symbol) ++run;
    if (l + run == coding.size()) {
      throw Error(ErrorKind::insufficient_prefix, "block run reaches the end of the coding");
    }
    out.push_back(sum + static_cast<double>(run) * psi_block);
  }
  return out;
}

}  // namespace holder
