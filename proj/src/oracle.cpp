#include "holder/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "holder/error.hpp"
#include "holder/reduce.hpp"

namespace holder {

namespace {

/// Sum of table values over the n windows of w, padding past the end with symbol 0.
double window_sum(const LocallyConstantPotential& pot, const Word& w) {
  const int k = pot.depth();
  const auto m = static_cast<std::size_t>(pot.alphabet());
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::size_t idx = 0;
    for (int d = 0; d < k; ++d) {
      const std::size_t pos = i + static_cast<std::size_t>(d);
      idx = idx * m + (pos < w.size() ? static_cast<std::size_t>(w[pos]) : 0);
    }
    s += pot.value(idx);
  }
  return s;
}

void advance(Word& w, int m) {
  for (std::size_t i = w.size(); i-- > 0;) {
    if (++w[i] < m) return;
    w[i] = 0;
  }
}

}  // namespace

double pressure_direct(const LocallyConstantPotential& pot, int n, unsigned workers) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "level must be >= 1");
  const int m = pot.alphabet();
  const std::uint64_t total = checked_word_count(m, n);
  const auto combine = [](double a, double b) { return log_add_exp(a, b); };
  constexpr double kEmpty = -std::numeric_limits<double>::infinity();
  const double log_z = deterministic_reduce<double>(
      total, 1 << 12, workers,
      [&](std::uint64_t begin, std::uint64_t end) {
        PairwiseAccumulator<double, decltype(combine)> acc(combine);
        Word w = word_at(m, n, begin);
        for (std::uint64_t i = begin; i < end; ++i, advance(w, m)) acc.push(window_sum(pot, w));
        return acc.result(kEmpty);
      },
      combine, kEmpty);
  return log_z / n;
}

namespace {

struct Tally {
  std::vector<std::uint64_t> count;
  std::vector<double> diameter;
};

std::size_t bin_of(const std::vector<SpectrumBin>& bins, double ratio, std::size_t start = 0) {
  for (std::size_t b = start; b < bins.size(); ++b) {
    if (ratio >= bins[b].center - bins[b].half_width && ratio < bins[b].center + bins[b].half_width) {
      return b;
    }
  }
  return bins.size();
}

void add_to_bins(const std::vector<SpectrumBin>& bins, Tally& t, double ratio, std::uint64_t count,
                 double diameter_sum) {
  // Overlapping bins each receive the word.
  for (std::size_t b = bin_of(bins, ratio); b < bins.size(); b = bin_of(bins, ratio, b + 1)) {
    t.count[b] += count;
    t.diameter[b] += diameter_sum;
  }
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

std::vector<CoarseSpectrumBin> coarse_spectrum(const LocallyConstantPotential& psi,
                                               const LocallyConstantPotential& phi,
                                               const std::vector<SpectrumBin>& bins, int n,
                                               CountingMethod method, unsigned workers) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "level must be >= 1");
  if (psi.alphabet() != phi.alphabet()) {
    throw Error(ErrorKind::invalid_argument, "psi and phi use different alphabets");
  }
  const bool binomial_ok = psi.alphabet() == 2 && psi.depth() == 1 && phi.depth() == 1;
  if (method == CountingMethod::automatic) {
    method = binomial_ok ? CountingMethod::binomial : CountingMethod::enumerate;
  }
  if (method == CountingMethod::binomial && !binomial_ok) {
    throw Error(ErrorKind::invalid_argument, "binomial counting needs a two-symbol depth-1 pair");
  }
  if (method == CountingMethod::binomial && n > 62) {
    throw Error(ErrorKind::budget_exceeded, "binomial counts overflow beyond level 62");
  }
  Tally tally{std::vector<std::uint64_t>(bins.size(), 0), std::vector<double>(bins.size(), 0.0)};
  if (method == CountingMethod::binomial) {
    for (int k = 0; k <= n; ++k) {
      const double sp = (n - k) * psi.value(0) + k * psi.value(1);
      const double sf = (n - k) * phi.value(0) + k * phi.value(1);
      const auto c = static_cast<std::uint64_t>(std::llround(std::exp(log_binomial(n, k))));
      add_to_bins(bins, tally, sp / sf, c, static_cast<double>(c) * std::exp(sf));
    }
  } else {
    const int m = psi.alphabet();
    const std::uint64_t total = checked_word_count(m, n);
    const auto merge = [](Tally a, const Tally& b) {
      for (std::size_t i = 0; i < a.count.size(); ++i) {
        a.count[i] += b.count[i];
        a.diameter[i] += b.diameter[i];
      }
      return a;
    };
    tally = deterministic_reduce<Tally>(
        total, 1 << 14, workers,
        [&](std::uint64_t begin, std::uint64_t end) {
          Tally t{std::vector<std::uint64_t>(bins.size(), 0), std::vector<double>(bins.size(), 0.0)};
          Word w = word_at(m, n, begin);
          for (std::uint64_t i = begin; i < end; ++i, advance(w, m)) {
            const double sf = window_sum(phi, w);
            add_to_bins(bins, t, window_sum(psi, w) / sf, 1, std::exp(sf));
          }
          return t;
        },
        merge, tally);
  }
  std::vector<CoarseSpectrumBin> out;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    CoarseSpectrumBin r;
    r.center = bins[b].center;
    r.half_width = bins[b].half_width;
    r.level = n;
    r.count = tally.count[b];
    if (r.count > 0) {
      r.mean_diameter = tally.diameter[b] / static_cast<double>(r.count);
      r.estimate = std::log(static_cast<double>(r.count)) / -std::log(r.mean_diameter);
    } else {
      r.estimate = std::nan("");
    }
    out.push_back(r);
  }
  return out;
}

double fd_derivative(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

namespace {

struct OracleSweep {
  const std::vector<AffineMap>* maps;
  const std::vector<double>* weights;
  Interval seed;
  int depth;
  const std::vector<std::size_t>* order;
  const std::vector<double>* xs;
  std::vector<StaircaseBracket>* out;
  std::size_t next = 0;
  double cumulative = 0.0;

  void leaf(double lo, double hi, double mass) {
    while (next < order->size() && (*xs)[(*order)[next]] <= lo) {
      (*out)[(*order)[next++]] = {cumulative, cumulative};
    }
    while (next < order->size() && (*xs)[(*order)[next]] < hi) {
      (*out)[(*order)[next++]] = {cumulative, cumulative + mass};
    }
    cumulative += mass;
  }

  void descend(int level, double scale, double shift, double mass) {
    if (level == depth) {
      leaf(scale * seed.lo + shift, scale * seed.hi + shift, mass);
      return;
    }
    for (std::size_t j = 0; j < maps->size(); ++j) {
      const AffineMap& f = (*maps)[j];
      descend(level + 1, scale * f.ratio, scale * f.offset + shift, mass * (*weights)[j]);
    }
  }
};

}  // namespace

std::vector<StaircaseBracket> staircase_oracle(const Ifs& ifs, const std::vector<double>& weights,
                                               int depth, const std::vector<double>& xs) {
  if (!ifs.all_affine()) throw Error(ErrorKind::invalid_argument, "oracle needs affine maps");
  if (weights.size() != static_cast<std::size_t>(ifs.size())) {
    throw Error(ErrorKind::invalid_argument, "one weight per map is required");
  }
  checked_word_count(ifs.size(), depth);
  std::vector<AffineMap> maps;
  for (Symbol j = 0; j < ifs.size(); ++j) maps.push_back(ifs.map(j).affine());
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<StaircaseBracket> out(xs.size());
  OracleSweep sweep{&maps, &weights, ifs.seed(), depth, &order, &xs, &out};
  sweep.descend(0, 1.0, 0.0, 1.0);
  while (sweep.next < order.size()) out[order[sweep.next++]] = {sweep.cumulative, sweep.cumulative};
  return out;
}

}  // namespace holder
