#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fusionclust {

/// Error-free accumulation of a sum of doubles as an unevaluated pair
/// (hi + lo). Two accumulators holding the same exact total compare
/// equal in `value()` regardless of summation order, as long as the
/// exact total fits in ~106 bits.
class ExactSum {
 public:
  ExactSum() = default;
  explicit ExactSum(double x) : hi_(x) {}

  ExactSum& operator+=(double x) noexcept;
  ExactSum& operator+=(const ExactSum& other) noexcept;

  double value() const noexcept { return hi_ + lo_; }

 private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

/// Ascending distinct observations with multiplicities.
///
/// Duplicated observations are folded into a single entry whose count
/// is the multiplicity. Entry indices (0..size()-1) are what the path
/// algorithms operate on; `n()` is the total number of observations.
class SortedSample {
 public:
  /// Sorts, folds duplicates and validates. Throws InvalidSampleError on
  /// empty input or non-finite values.
  static SortedSample from_values(std::span<const double> raw);

  /// Builds from already-folded data. Throws InvalidSampleError unless
  /// values are finite and strictly increasing and counts are positive.
  static SortedSample from_entries(std::vector<double> values,
                                   std::vector<std::size_t> counts);

  std::span<const double> values() const noexcept { return values_; }
  std::span<const std::size_t> counts() const noexcept { return counts_; }

  /// Number of distinct entries.
  std::size_t size() const noexcept { return values_.size(); }
  /// Total number of observations.
  std::size_t n() const noexcept { return n_; }

  double value(std::size_t i) const { return values_[i]; }
  std::size_t count(std::size_t i) const { return counts_[i]; }

  /// Observation count of entries [first, last).
  std::size_t count_in(std::size_t first, std::size_t last) const;
  /// Exact sum of observations of entries [first, last).
  ExactSum sum_in(std::size_t first, std::size_t last) const;
  double mean_in(std::size_t first, std::size_t last) const;

  double grand_mean() const { return mean_in(0, size()); }

  /// All observations in ascending order with multiplicities expanded.
  std::vector<double> expanded() const;

 private:
  SortedSample(std::vector<double> values, std::vector<std::size_t> counts);

  std::vector<double> values_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> cumulative_counts_;  // size()+1 prefix counts
  std::size_t n_ = 0;
};

}  // namespace fusionclust
