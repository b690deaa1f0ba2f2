#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fusionclust/data_matrix.hpp"
#include "fusionclust/fusion_path.hpp"
#include "fusionclust/sorted_sample.hpp"

namespace fusionclust {

/// Big Merge Tracker settings.
struct BmtConfig {
  /// Minimum empirical cluster share on both sides of a kept merge, in (0, 0.5].
  double alpha = 0.1;
  /// Drop every split when the last big merge covers less than half the data.
  bool adjustment_enabled = true;

  /// Throws DomainError when alpha is outside (0, 0.5].
  void validate() const;
};

/// A merge in which both clusters exceed ceil(n * alpha) observations.
struct BigMerge {
  MergeEvent event;
  /// (left_size + right_size) / n.
  double mass_after = 0.0;
  /// (left_max * left_size + right_min * right_size) / (left_size + right_size).
  double split_point = 0.0;

  friend bool operator==(const BigMerge&, const BigMerge&) = default;
};

struct BmtResult {
  /// Ascending, strictly between adjacent sample values.
  std::vector<double> split_points;
  std::size_t num_clusters = 1;
  /// Big merges in path order (ascending lambda); empty when discarded.
  std::vector<BigMerge> big_merges;
  /// True when the 50% adjustment discarded otherwise-kept merges.
  bool discarded_by_adjustment = false;

  friend bool operator==(const BmtResult&, const BmtResult&) = default;
};

/// Smallest cluster size that still fails the big-merge test, ceil(n * alpha).
std::size_t big_merge_threshold(std::size_t n, double alpha);

/// Post-processes a path: keeps merges where both sides exceed
/// ceil(n * alpha), converts them to split points and applies the
/// adjustment. Samples with n <= 2 yield no splits.
BmtResult run_bmt(const ClusterPath& path, const BmtConfig& config);
BmtResult run_bmt(const SortedSample& sample, const BmtConfig& config);

/// label(x) = number of split points <= x, so ties join the right
/// cluster. Works on any order of `values`. Throws DomainError when
/// splits are not strictly increasing.
std::vector<std::size_t> assign_labels(std::span<const double> values,
                                       std::span<const double> splits);
/// One label per observation of the sorted sample (multiplicities expanded).
std::vector<std::size_t> assign_labels(const SortedSample& sample,
                                       std::span<const double> splits);

struct MultivariateBmtResult {
  std::vector<BmtResult> per_dimension;
  /// per_dimension_labels[d][row].
  std::vector<std::vector<std::size_t>> per_dimension_labels;
  /// Mixed-radix code of the per-dimension label tuple (dimension 0 most
  /// significant), one per row.
  std::vector<std::size_t> joint_labels;
  /// Product of per-dimension cluster counts.
  std::size_t joint_cluster_count = 1;
  /// Number of distinct label tuples actually present.
  std::size_t occupied_cluster_count = 1;

  /// The per-dimension label tuple of `row`.
  std::vector<std::size_t> label_tuple(std::size_t row) const;
};

/// Runs the tracker on every column independently; the joint clustering
/// is the product of the per-column partitions. Throws DomainError on
/// non-finite entries or an empty matrix.
MultivariateBmtResult run_bmt_multivariate(const DataMatrix& data, const BmtConfig& config);

/// True when the tracker retains at least one split.
bool assess_modality(const SortedSample& sample, const BmtConfig& config);

}  // namespace fusionclust
