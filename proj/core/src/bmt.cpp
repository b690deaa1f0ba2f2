#include "fusionclust/bmt.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "fusionclust/errors.hpp"

namespace fusionclust {

void BmtConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 0.5)) {
    throw DomainError("alpha must lie in (0, 0.5], got " + std::to_string(alpha));
  }
}

std::size_t big_merge_threshold(std::size_t n, double alpha) {
  const double x = static_cast<double>(n) * alpha;
  // n * alpha lands a rounding error above an integer for e.g. 0.1 * 5000
  return static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

BmtResult run_bmt(const SortedSample& sample, const BmtConfig& config) {
  config.validate();
  return run_bmt(build_merge_path(sample), config);
}

BmtResult run_bmt(const ClusterPath& path, const BmtConfig& config) {
  config.validate();
  BmtResult result;
  const std::size_t n = path.sample().n();
  if (n <= 2) {
    return result;
  }
  const std::size_t threshold = big_merge_threshold(n, config.alpha);

  for (const MergeEvent& ev : path.events()) {
    if (std::min(ev.left_size, ev.right_size) <= threshold) continue;
    const auto ls = static_cast<double>(ev.left_size);
    const auto rs = static_cast<double>(ev.right_size);
    BigMerge big;
    big.event = ev;
    big.mass_after = (ls + rs) / static_cast<double>(n);
    big.split_point = (ev.left_max * ls + ev.right_min * rs) / (ls + rs);
    result.big_merges.push_back(big);
  }

  if (config.adjustment_enabled && !result.big_merges.empty()) {
    // The last big merge in path order carries the largest lambda.
    if (result.big_merges.back().mass_after < 0.5) {
      result.big_merges.clear();
      result.discarded_by_adjustment = true;
    }
  }

  for (const BigMerge& big : result.big_merges) {
    result.split_points.push_back(big.split_point);
  }
  std::sort(result.split_points.begin(), result.split_points.end());
  result.num_clusters = result.split_points.size() + 1;
  return result;
}

namespace {

void require_increasing(std::span<const double> splits) {
  for (std::size_t i = 1; i < splits.size(); ++i) {
    if (!(splits[i - 1] < splits[i])) {
      throw DomainError("split points must be strictly increasing");
    }
  }
}

std::size_t label_of(double x, std::span<const double> splits) {
  return static_cast<std::size_t>(std::upper_bound(splits.begin(), splits.end(), x) -
                                  splits.begin());
}

}  // namespace

std::vector<std::size_t> assign_labels(std::span<const double> values,
                                       std::span<const double> splits) {
  require_increasing(splits);
  std::vector<std::size_t> labels;
  labels.reserve(values.size());
  for (double x : values) labels.push_back(label_of(x, splits));
  return labels;
}

std::vector<std::size_t> assign_labels(const SortedSample& sample,
                                       std::span<const double> splits) {
  require_increasing(splits);
  std::vector<std::size_t> labels;
  labels.reserve(sample.n());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    labels.insert(labels.end(), sample.count(i), label_of(sample.value(i), splits));
  }
  return labels;
}

std::vector<std::size_t> MultivariateBmtResult::label_tuple(std::size_t row) const {
  std::vector<std::size_t> tuple;
  tuple.reserve(per_dimension_labels.size());
  for (const auto& labels : per_dimension_labels) tuple.push_back(labels.at(row));
  return tuple;
}

MultivariateBmtResult run_bmt_multivariate(const DataMatrix& data, const BmtConfig& config) {
  config.validate();
  if (data.rows() == 0 || data.cols() == 0) {
    throw DomainError("data matrix is empty");
  }
  for (std::size_t c = 0; c < data.cols(); ++c) {
    for (double x : data.column(c)) {
      if (!std::isfinite(x)) {
        throw DomainError("non-finite entry in column " + std::to_string(c));
      }
    }
  }

  MultivariateBmtResult out;
  out.per_dimension.reserve(data.cols());
  out.per_dimension_labels.reserve(data.cols());
  for (std::size_t c = 0; c < data.cols(); ++c) {
    const auto column = data.column(c);
    out.per_dimension.push_back(run_bmt(SortedSample::from_values(column), config));
    out.per_dimension_labels.push_back(
        assign_labels(column, out.per_dimension.back().split_points));
    out.joint_cluster_count *= out.per_dimension.back().num_clusters;
  }

  out.joint_labels.assign(data.rows(), 0);
  for (std::size_t c = 0; c < data.cols(); ++c) {
    const std::size_t radix = out.per_dimension[c].num_clusters;
    for (std::size_t r = 0; r < data.rows(); ++r) {
      out.joint_labels[r] = out.joint_labels[r] * radix + out.per_dimension_labels[c][r];
    }
  }
  const std::unordered_set<std::size_t> occupied(out.joint_labels.begin(),
                                                 out.joint_labels.end());
  out.occupied_cluster_count = occupied.size();
  return out;
}

bool assess_modality(const SortedSample& sample, const BmtConfig& config) {
  return !run_bmt(sample, config).split_points.empty();
}

}  // namespace fusionclust
