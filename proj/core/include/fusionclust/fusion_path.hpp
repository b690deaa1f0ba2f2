#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include "fusionclust/sorted_sample.hpp"

namespace fusionclust {

/// Contiguous run of sample entries [first, last).
struct EntryRange {
  std::size_t first = 0;
  std::size_t last = 0;

  friend bool operator==(const EntryRange&, const EntryRange&) = default;
};

/// One fusion of two adjacent clusters along the solution path.
struct MergeEvent {
  /// Tuning-parameter value at which the two centroids collide:
  /// (right_mean - left_mean) / (left_size + right_size).
  double lambda = 0.0;
  std::size_t left_size = 0;
  std::size_t right_size = 0;
  double left_mean = 0.0;
  double right_mean = 0.0;
  /// Largest observation of the left cluster.
  double left_max = 0.0;
  /// Smallest observation of the right cluster.
  double right_min = 0.0;
  /// Observation range (min, max) of the merged cluster.
  std::pair<double, double> merged_span{0.0, 0.0};

  /// Entry ranges of the two clusters: left = [first, split),
  /// right = [split, last).
  std::size_t first = 0;
  std::size_t split = 0;
  std::size_t last = 0;

  friend bool operator==(const MergeEvent&, const MergeEvent&) = default;
};

/// Full solution path of the univariate l1-fusion clustering criterion,
/// stored as the chronological sequence of merges. Immutable once built.
class ClusterPath {
 public:
  ClusterPath(std::shared_ptr<const SortedSample> sample, std::vector<MergeEvent> events);

  const SortedSample& sample() const noexcept { return *sample_; }
  std::shared_ptr<const SortedSample> sample_ptr() const noexcept { return sample_; }
  const std::vector<MergeEvent>& events() const noexcept { return events_; }

  /// Partition after applying the first `applied` merges.
  std::vector<EntryRange> partition_after(std::size_t applied) const;

 private:
  std::shared_ptr<const SortedSample> sample_;
  std::vector<MergeEvent> events_;
};

/// Bottom-up merging algorithm. At every step fuses the adjacent pair
/// with the smallest size-standardized mean gap
///   d(j, j+1) = (mean_{j+1} - mean_j) / (|C_j| + |C_{j+1}|),
/// ties going to the leftmost pair. O(n log n) via a lazily invalidated
/// binary heap. Emits size()-1 events (n-1 for data without ties).
ClusterPath build_merge_path(std::shared_ptr<const SortedSample> sample);
ClusterPath build_merge_path(const SortedSample& sample);

/// Top-down splitting procedure: each cluster is split where the gap
/// between the two sub-cluster means is largest; lambda = gap / |C|.
/// Events are returned in ascending lambda (merge chronology). O(n^2);
/// intended as a brute-force check of build_merge_path.
ClusterPath split_sequence_oracle(std::shared_ptr<const SortedSample> sample);
ClusterPath split_sequence_oracle(const SortedSample& sample);

/// Per-observation centroids at `lambda` (ascending observation order,
/// multiplicities expanded). Throws DomainError for negative lambda.
std::vector<double> centroids_at(const ClusterPath& path, double lambda);

/// Centroid formula evaluated at `lambda` on the partition reached after
/// `applied` merges, one value per cluster:
///   alpha_C = mean_C + lambda * (n_above - n_below).
std::vector<double> cluster_centroids(const ClusterPath& path, std::size_t applied,
                                      double lambda);

/// The k-cluster partition of the path. Throws DomainError unless
/// 1 <= k <= sample().size().
std::vector<EntryRange> partition_at_k(const ClusterPath& path, std::size_t k);

}  // namespace fusionclust
