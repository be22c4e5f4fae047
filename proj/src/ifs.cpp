#include "holder/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "holder/error.hpp"

namespace holder {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::separation_violated: return "separation-violated";
    case ErrorKind::invalid_seed: return "invalid-seed";
    case ErrorKind::invalid_map: return "invalid-map";
    case ErrorKind::normalization: return "normalization";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
    case ErrorKind::bracket_failure: return "bracket-failure";
    case ErrorKind::eigensolver: return "eigensolver";
    case ErrorKind::numerical_inconsistency: return "numerical-inconsistency";
    case ErrorKind::insufficient_prefix: return "insufficient-prefix";
    case ErrorKind::undefined_spectrum: return "undefined-spectrum";
    case ErrorKind::infeasible_plan: return "infeasible-plan";
    case ErrorKind::unresolved: return "unresolved";
    case ErrorKind::malformed_config: return "malformed-config";
  }
  return "unknown";
}

std::string word_to_string(const Word& w) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ',';
    os << w[i];
  }
  os << ']';
  return os.str();
}

double ContractionMap::apply(double x) const {
  if (const auto* a = std::get_if<AffineMap>(&impl_)) return (*a)(x);
  return std::get<GenericMap>(impl_).map(x);
}

double ContractionMap::derivative(double x) const {
  if (const auto* a = std::get_if<AffineMap>(&impl_)) return a->ratio;
  return std::get<GenericMap>(impl_).derivative(x);
}

Interval ContractionMap::image(const Interval& seed) const {
  return {apply(seed.lo), apply(seed.hi)};
}

namespace {

constexpr int kDerivativeSamples = 257;

struct DerivativeBounds {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
};

DerivativeBounds sample_derivative(const ContractionMap& m, const Interval& seed) {
  DerivativeBounds b;
  if (m.is_affine()) {
    b.min = b.max = m.affine().ratio;
    return b;
  }
  for (int i = 0; i < kDerivativeSamples; ++i) {
    const double x = seed.lo + seed.length() * i / (kDerivativeSamples - 1);
    const double d = m.derivative(x);
    b.min = std::min(b.min, d);
    b.max = std::max(b.max, d);
  }
  return b;
}

}  // namespace

SeparationReport check_separation(const std::vector<ContractionMap>& maps,
                                  const Interval& seed) {
  SeparationReport r;
  if (maps.empty()) {
    r.status = SeparationStatus::invalid_map;
    r.message = "IFS needs at least one map";
    return r;
  }
  if (!(seed.hi > seed.lo) || !std::isfinite(seed.lo) || !std::isfinite(seed.hi)) {
    r.status = SeparationStatus::invalid_seed;
    r.message = "seed interval must be finite with lo < hi";
    return r;
  }
  std::vector<Interval> images;
  images.reserve(maps.size());
  for (std::size_t j = 0; j < maps.size(); ++j) {
    const auto d = sample_derivative(maps[j], seed);
    if (!(d.min > 0.0)) {
      r.status = SeparationStatus::invalid_map;
      r.message = "map " + std::to_string(j) +
                  " is not orientation preserving (derivative must be > 0)";
      return r;
    }
    if (!(d.max < 1.0)) {
      r.status = SeparationStatus::invalid_map;
      r.message = "map " + std::to_string(j) + " is not a strict contraction";
      return r;
    }
    const Interval img = maps[j].image(seed);
    if (!seed.contains(img)) {
      r.status = SeparationStatus::invalid_seed;
      r.message = "image of map " + std::to_string(j) + " escapes the seed interval";
      return r;
    }
    images.push_back(img);
  }
  r.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < images.size(); ++j) {
    const double gap = images[j + 1].lo - images[j].hi;
    if (!(gap > 0.0)) {
      r.status = SeparationStatus::separation_violated;
      std::ostringstream os;
      os << "images of maps " << j << " and " << j + 1
         << (images[j + 1].hi <= images[j].lo ? " are not ordered left to right"
                                              : " overlap");
      r.message = os.str();
      return r;
    }
    r.min_gap = std::min(r.min_gap, gap);
  }
  return r;
}

SeparationReport validate_separation(const std::vector<ContractionMap>& maps,
                                     const Interval& seed) {
  auto r = check_separation(maps, seed);
  switch (r.status) {
    case SeparationStatus::ok: return r;
    case SeparationStatus::separation_violated:
      throw Error(ErrorKind::separation_violated, r.message);
    case SeparationStatus::invalid_seed:
      throw Error(ErrorKind::invalid_seed, r.message);
    case SeparationStatus::invalid_map:
      throw Error(ErrorKind::invalid_map, r.message);
  }
  return r;
}

Ifs::Ifs(std::vector<ContractionMap> maps, Interval seed)
    : maps_(std::move(maps)), seed_(seed) {
  min_gap_ = validate_separation(maps_, seed_).min_gap;
  min_contraction_ = std::numeric_limits<double>::infinity();
  for (const auto& m : maps_) {
    all_affine_ = all_affine_ && m.is_affine();
    const auto d = sample_derivative(m, seed_);
    max_contraction_ = std::max(max_contraction_, d.max);
    min_contraction_ = std::min(min_contraction_, d.min);
  }
}

Ifs Ifs::affine(const std::vector<AffineMap>& maps, Interval seed) {
  return Ifs(std::vector<ContractionMap>(maps.begin(), maps.end()), seed);
}

SeparationReport validate_separation(const Ifs& ifs) {
  return validate_separation(ifs.maps(), ifs.seed());
}

bool Ifs::valid_word(const Word& w) const {
  return std::all_of(w.begin(), w.end(),
                     [this](Symbol s) { return s >= 0 && s < size(); });
}

Interval Ifs::apply_word(const Word& w, Interval base) const {
  // Innermost map is the last symbol; w_1 is applied last.
  for (auto it = w.rbegin(); it != w.rend(); ++it) base = maps_[*it].image(base);
  return base;
}

CylinderRecord cylinder(const Ifs& ifs, const Word& word) {
  if (!ifs.valid_word(word)) {
    throw Error(ErrorKind::invalid_argument,
                "word " + word_to_string(word) + " has symbols outside the alphabet");
  }
  CylinderRecord rec;
  rec.word = word;
  rec.interval = ifs.apply_word(word, ifs.seed());
  rec.diameter = rec.interval.length();
  return rec;
}

std::uint64_t checked_word_count(int alphabet, int n, std::uint64_t budget) {
  if (alphabet < 1) throw Error(ErrorKind::invalid_argument, "empty alphabet");
  if (n < 0) throw Error(ErrorKind::invalid_argument, "negative level");
  std::uint64_t count = 1;
  for (int i = 0; i < n; ++i) {
    if (count > budget / static_cast<std::uint64_t>(alphabet)) {
      throw Error(ErrorKind::budget_exceeded,
                  std::to_string(alphabet) + "^" + std::to_string(n) +
                      " cylinders exceed the budget of " + std::to_string(budget));
    }
    count *= static_cast<std::uint64_t>(alphabet);
  }
  if (count > budget) {
    throw Error(ErrorKind::budget_exceeded, "cylinder count exceeds budget");
  }
  return count;
}

Word word_at(int alphabet, int n, std::uint64_t index) {
  Word w(static_cast<std::size_t>(n), 0);
  for (int i = n - 1; i >= 0; --i) {
    w[i] = static_cast<Symbol>(index % static_cast<std::uint64_t>(alphabet));
    index /= static_cast<std::uint64_t>(alphabet);
  }
  return w;
}

CylinderEnumeration::CylinderEnumeration(const Ifs& ifs, int level,
                                         std::uint64_t budget)
    : ifs_(&ifs), level_(level), begin_(0),
      end_(checked_word_count(ifs.size(), level, budget)) {}

CylinderRecord CylinderEnumeration::at(std::uint64_t offset) const {
  if (offset >= size()) throw Error(ErrorKind::invalid_argument, "cylinder index out of range");
  return cylinder(*ifs_, word_at(ifs_->size(), level_, begin_ + offset));
}

CylinderEnumeration CylinderEnumeration::subrange(std::uint64_t begin,
                                                  std::uint64_t end) const {
  if (begin > end || end > size()) {
    throw Error(ErrorKind::invalid_argument, "invalid cylinder subrange");
  }
  CylinderEnumeration sub = *this;
  sub.begin_ = begin_ + begin;
  sub.end_ = begin_ + end;
  return sub;
}

std::vector<CylinderEnumeration> CylinderEnumeration::split(std::uint64_t parts) const {
  if (parts == 0) parts = 1;
  std::vector<CylinderEnumeration> out;
  const std::uint64_t n = size();
  for (std::uint64_t p = 0; p < parts; ++p) {
    out.push_back(subrange(n * p / parts, n * (p + 1) / parts));
  }
  return out;
}

void CylinderEnumeration::for_each(
    const std::function<void(const CylinderRecord&)>& visit) const {
  if (begin_ == end_) return;
  const int m = ifs_->size();
  CylinderRecord rec;
  rec.word = word_at(m, level_, begin_);
  for (std::uint64_t idx = begin_; idx < end_; ++idx) {
    rec.interval = ifs_->apply_word(rec.word, ifs_->seed());
    rec.diameter = rec.interval.length();
    visit(rec);
    // Odometer increment, last symbol fastest.
    for (int i = level_ - 1; i >= 0; --i) {
      if (++rec.word[i] < m) break;
      rec.word[i] = 0;
    }
  }
}

}  // namespace holder
