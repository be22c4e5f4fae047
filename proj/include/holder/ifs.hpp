#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace holder {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(const Interval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Symbol index into the alphabet. 0 is the leftmost map, size-1 the rightmost.
using Symbol = int;

/// Finite coding [w_1, ..., w_n]; w_1 selects the level-1 branch.
using Word = std::vector<Symbol>;

std::string word_to_string(const Word& w);

/// x -> ratio * x + offset with ratio in (0, 1).
struct AffineMap {
  double ratio = 0.5;
  double offset = 0.0;

  double operator()(double x) const { return ratio * x + offset; }
};

/// Order-preserving C^{1+eps} contraction given by user evaluators.
struct GenericMap {
  std::function<double(double)> map;
  std::function<double(double)> derivative;
  double holder_exponent = 1.0;
};

class ContractionMap {
 public:
  ContractionMap(AffineMap m) : impl_(m) {}  // NOLINT(google-explicit-constructor)
  ContractionMap(GenericMap m) : impl_(std::move(m)) {}  // NOLINT

  bool is_affine() const { return std::holds_alternative<AffineMap>(impl_); }
  const AffineMap& affine() const { return std::get<AffineMap>(impl_); }

  double apply(double x) const;
  double derivative(double x) const;
  Interval image(const Interval& seed) const;

 private:
  std::variant<AffineMap, GenericMap> impl_;
};

enum class SeparationStatus { ok, separation_violated, invalid_seed, invalid_map };

struct SeparationReport {
  SeparationStatus status = SeparationStatus::ok;
  /// Smallest gap between consecutive level-1 images (infinity for a single map).
  double min_gap = 0.0;
  std::string message;

  bool ok() const { return status == SeparationStatus::ok; }
};

/// Checks containment, ordering and pairwise disjointness of level-1 images
/// without throwing.
SeparationReport check_separation(const std::vector<ContractionMap>& maps,
                                  const Interval& seed);

/// As check_separation, but throws Error on any violation.
SeparationReport validate_separation(const std::vector<ContractionMap>& maps,
                                     const Interval& seed);

/// Finite conformal IFS on a seed interval satisfying strong separation.
/// Immutable; the constructor validates and throws on violation.
class Ifs {
 public:
  Ifs(std::vector<ContractionMap> maps, Interval seed = {0.0, 1.0});

  static Ifs affine(const std::vector<AffineMap>& maps, Interval seed = {0.0, 1.0});

  int size() const { return static_cast<int>(maps_.size()); }
  const Interval& seed() const { return seed_; }
  const ContractionMap& map(Symbol j) const { return maps_.at(j); }
  const std::vector<ContractionMap>& maps() const { return maps_; }
  bool all_affine() const { return all_affine_; }

  /// Largest sampled |f_j'| over all maps (exact for affine maps).
  double max_contraction() const { return max_contraction_; }
  double min_contraction() const { return min_contraction_; }
  double min_gap() const { return min_gap_; }

  /// f_{w_1} o ... o f_{w_n} applied to an interval.
  Interval apply_word(const Word& w, Interval base) const;
  bool valid_word(const Word& w) const;

 private:
  std::vector<ContractionMap> maps_;
  Interval seed_;
  bool all_affine_ = true;
  double max_contraction_ = 0.0;
  double min_contraction_ = 1.0;
  double min_gap_ = 0.0;
};

SeparationReport validate_separation(const Ifs& ifs);

struct CylinderRecord {
  Word word;
  Interval interval;
  double diameter = 0.0;
};

CylinderRecord cylinder(const Ifs& ifs, const Word& word);

inline constexpr std::uint64_t kDefaultCylinderBudget = std::uint64_t{1} << 26;

/// Number of words of length n, or throws budget_exceeded when |J|^n > budget.
std::uint64_t checked_word_count(int alphabet, int n,
                                 std::uint64_t budget = kDefaultCylinderBudget);

/// Word with lexicographic rank `index` among words of length n.
Word word_at(int alphabet, int n, std::uint64_t index);

/// Lexicographic stream of the |J|^n level-n cylinders. Sub-ranges are
/// independent so they can be consumed in parallel.
class CylinderEnumeration {
 public:
  CylinderEnumeration(const Ifs& ifs, int level,
                      std::uint64_t budget = kDefaultCylinderBudget);

  std::uint64_t size() const { return end_ - begin_; }
  std::uint64_t begin_index() const { return begin_; }
  std::uint64_t end_index() const { return end_; }
  int level() const { return level_; }

  CylinderRecord at(std::uint64_t offset) const;
  CylinderEnumeration subrange(std::uint64_t begin, std::uint64_t end) const;
  std::vector<CylinderEnumeration> split(std::uint64_t parts) const;

  /// Visits records in lexicographic order.
  void for_each(const std::function<void(const CylinderRecord&)>& visit) const;

 private:
  const Ifs* ifs_;
  int level_;
  std::uint64_t begin_ = 0;
  std::uint64_t end_ = 0;
};

inline CylinderEnumeration enumerate_cylinders(
    const Ifs& ifs, int level, std::uint64_t budget = kDefaultCylinderBudget) {
  return CylinderEnumeration(ifs, level, budget);
}

}  // namespace holder
