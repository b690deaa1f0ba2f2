#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fusionclust/bmt.hpp"
#include "fusionclust/mixture.hpp"
#include "fusionclust/population.hpp"

namespace fusionclust {

/// Independent mixtures, one per coordinate. A single entry is the
/// univariate case.
using ProductMixture = std::vector<MixtureModel>;

struct ExperimentSpec {
  ProductMixture mixture;
  std::size_t n = 1000;
  std::size_t replicates = 20;
  double alpha = 0.1;
  std::uint64_t base_seed = 0;
  bool adjustment_enabled = true;
  /// Worker threads; 0 reads FUSIONCLUST_THREADS, then the hardware count.
  std::size_t threads = 0;

  /// Throws DomainError on an empty mixture, n == 0, replicates == 0 or a
  /// bad alpha.
  void validate() const;
  std::size_t dimension() const noexcept { return mixture.size(); }
};

struct ReplicationSummary {
  std::size_t replicates = 0;
  /// Detected cluster count -> number of replicates.
  std::map<std::size_t, std::size_t> k_histogram;
  double multimodal_rate = 0.0;
  /// Number of cells of the partition at the true density's interior minima.
  std::optional<std::size_t> true_k;
  /// Mean and SD over the replicates that detect true_k; empty if none do.
  std::optional<double> mse_mean;
  std::optional<double> mse_sd;
  std::optional<double> oracle_mse;
  double mean_runtime_seconds = 0.0;
  /// Per-replicate values in replicate order.
  std::vector<std::size_t> k_values;
  std::vector<double> mse_values;

  friend bool operator==(const ReplicationSummary&, const ReplicationSummary&) = default;

  /// Most frequent k (smallest on ties) and its share of replicates.
  std::size_t modal_k() const;
  double share(std::size_t k) const;
};

/// Equality of everything except wall-clock runtime.
bool same_statistics(const ReplicationSummary& a, const ReplicationSummary& b);

/// Stable 64-bit seed of replicate `r` (splitmix64 mixing of the pair).
std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint64_t r);

/// Draws replicate `r`: n x dimension, column j seeded from (replicate seed, j).
DataMatrix draw_replicate(const ExperimentSpec& spec, std::size_t r);

/// Fraction of replicates in which the tracker keeps at least one split.
ReplicationSummary run_modality_experiment(const ExperimentSpec& spec);
/// Histogram of detected cluster counts; product mixtures use the
/// product of the per-coordinate counts.
ReplicationSummary run_k_experiment(const ExperimentSpec& spec);
/// Cluster counts, sample MSE against the oracle MSE, and runtime.
/// Univariate only.
ReplicationSummary run_scale_experiment(const ExperimentSpec& spec);

/// (1/n) sum (x_i - mean of its cluster)^2 for the partition at `splits`.
double sample_mse(std::span<const double> values, std::span<const double> splits);

/// Within-cluster variance of the population partition at the density's
/// interior minima, with conditional means as centers.
double oracle_mse(const MixtureModel& m);

/// Hausdorff distance between finite sets under the max-norm.
/// Throws DomainError when either set is empty.
double hausdorff_distance(const std::vector<SplitTriple>& a, const std::vector<SplitTriple>& b);
double hausdorff_distance(const std::vector<double>& a, const std::vector<double>& b);

enum class ConsistencyStatus { ok, no_population_split };

struct ConsistencyRow {
  std::size_t n = 0;
  /// Median Hausdorff distance between retained and population split
  /// points; +inf counts replicates without a retained split.
  double median_error = 0.0;

  friend bool operator==(const ConsistencyRow&, const ConsistencyRow&) = default;
};

struct ConsistencyReport {
  ConsistencyStatus status = ConsistencyStatus::ok;
  std::optional<double> population_split;
  std::vector<ConsistencyRow> rows;
  /// Medians non-increasing in n.
  bool non_increasing = true;

  friend bool operator==(const ConsistencyReport&, const ConsistencyReport&) = default;
};

ConsistencyReport run_consistency_check(const MixtureModel& m, const std::vector<std::size_t>& n_list,
                                        std::size_t replicates, std::uint64_t base_seed,
                                        double alpha = 0.1, std::size_t threads = 0);

std::string to_string(ConsistencyStatus status);

/// Threads used when a spec asks for 0.
std::size_t default_thread_count();

}  // namespace fusionclust
