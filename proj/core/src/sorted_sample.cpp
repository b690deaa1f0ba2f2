#include "fusionclust/sorted_sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fusionclust/errors.hpp"

namespace fusionclust {

namespace {

// Knuth's TwoSum: a + b == s + e exactly.
inline void two_sum(double a, double b, double& s, double& e) noexcept {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

}  // namespace

ExactSum& ExactSum::operator+=(double x) noexcept {
  double s;
  double e;
  two_sum(hi_, x, s, e);
  e += lo_;
  two_sum(s, e, hi_, lo_);
  return *this;
}

ExactSum& ExactSum::operator+=(const ExactSum& other) noexcept {
  *this += other.hi_;
  *this += other.lo_;
  return *this;
}

SortedSample::SortedSample(std::vector<double> values, std::vector<std::size_t> counts)
    : values_(std::move(values)), counts_(std::move(counts)) {
  cumulative_counts_.resize(values_.size() + 1, 0);
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    cumulative_counts_[i + 1] = cumulative_counts_[i] + counts_[i];
  }
  n_ = cumulative_counts_.back();
}

SortedSample SortedSample::from_values(std::span<const double> raw) {
  if (raw.empty()) {
    throw InvalidSampleError("sample is empty");
  }
  std::vector<double> sorted(raw.begin(), raw.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!std::isfinite(sorted[i])) {
      throw InvalidSampleError("observation " + std::to_string(i) + " is not finite");
    }
  }
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> values;
  std::vector<std::size_t> counts;
  values.reserve(sorted.size());
  counts.reserve(sorted.size());
  for (double x : sorted) {
    if (!values.empty() && values.back() == x) {
      ++counts.back();
    } else {
      values.push_back(x);
      counts.push_back(1);
    }
  }
  return SortedSample(std::move(values), std::move(counts));
}

SortedSample SortedSample::from_entries(std::vector<double> values,
                                        std::vector<std::size_t> counts) {
  if (values.empty()) {
    throw InvalidSampleError("sample is empty");
  }
  if (values.size() != counts.size()) {
    throw InvalidSampleError("values and counts differ in length");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InvalidSampleError("entry " + std::to_string(i) + " is not finite");
    }
    if (counts[i] == 0) {
      throw InvalidSampleError("entry " + std::to_string(i) + " has zero multiplicity");
    }
    if (i > 0 && !(values[i - 1] < values[i])) {
      throw InvalidSampleError("entries are not strictly increasing at " + std::to_string(i));
    }
  }
  return SortedSample(std::move(values), std::move(counts));
}

std::size_t SortedSample::count_in(std::size_t first, std::size_t last) const {
  return cumulative_counts_[last] - cumulative_counts_[first];
}

ExactSum SortedSample::sum_in(std::size_t first, std::size_t last) const {
  ExactSum sum;
  for (std::size_t i = first; i < last; ++i) {
    if (counts_[i] == 1) {
      sum += values_[i];
    } else {
      // value * count is exact up to a rounding error we keep as well
      const double c = static_cast<double>(counts_[i]);
      const double p = values_[i] * c;
      sum += p;
      sum += std::fma(values_[i], c, -p);
    }
  }
  return sum;
}

double SortedSample::mean_in(std::size_t first, std::size_t last) const {
  return sum_in(first, last).value() / static_cast<double>(count_in(first, last));
}

std::vector<double> SortedSample::expanded() const {
  std::vector<double> out;
  out.reserve(n_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    out.insert(out.end(), counts_[i], values_[i]);
  }
  return out;
}

}  // namespace fusionclust
