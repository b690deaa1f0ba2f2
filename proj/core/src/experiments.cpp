#include "fusionclust/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "fusionclust/errors.hpp"

namespace fusionclust {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Runs body(i) for i in [0, count) on `threads` workers; the first
// exception is rethrown after all workers finish.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
  threads = std::min(threads == 0 ? default_thread_count() : threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          const std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

BmtConfig config_of(const ExperimentSpec& spec) {
  BmtConfig c;
  c.alpha = spec.alpha;
  c.adjustment_enabled = spec.adjustment_enabled;
  return c;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  if (v.size() % 2 == 1) return v[h];
  if (std::isinf(v[h])) return v[h];
  return 0.5 * (v[h - 1] + v[h]);
}

struct Replicate {
  std::size_t k = 1;
  bool multimodal = false;
  double mse = 0.0;
  double seconds = 0.0;
};

ReplicationSummary summarize(const std::vector<Replicate>& reps,
                             std::optional<std::size_t> true_k) {
  const bool with_mse = true_k.has_value();
  ReplicationSummary s;
  s.replicates = reps.size();
  std::size_t multimodal = 0;
  double seconds = 0.0;
  for (const Replicate& r : reps) {
    ++s.k_histogram[r.k];
    s.k_values.push_back(r.k);
    multimodal += r.multimodal ? 1 : 0;
    seconds += r.seconds;
    if (with_mse) s.mse_values.push_back(r.mse);
  }
  s.multimodal_rate = static_cast<double>(multimodal) / static_cast<double>(reps.size());
  s.mean_runtime_seconds = seconds / static_cast<double>(reps.size());
  if (with_mse) {
    s.true_k = true_k;
    std::vector<double> hits;
    for (const Replicate& r : reps) {
      if (r.k == *true_k) hits.push_back(r.mse);
    }
    if (!hits.empty()) {
      const double n = static_cast<double>(hits.size());
      const double mean = std::accumulate(hits.begin(), hits.end(), 0.0) / n;
      double ss = 0.0;
      for (double v : hits) ss += (v - mean) * (v - mean);
      s.mse_mean = mean;
      s.mse_sd = hits.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    }
  }
  return s;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (mixture.empty()) throw DomainError("experiment needs at least one mixture");
  if (n == 0) throw DomainError("experiment sample size must be positive");
  if (replicates == 0) throw DomainError("experiment needs at least one replicate");
  BmtConfig c;
  c.alpha = alpha;
  c.validate();
}

std::size_t ReplicationSummary::modal_k() const {
  std::size_t best_k = 0;
  std::size_t best = 0;
  for (const auto& [k, count] : k_histogram) {
    if (count > best) {
      best = count;
      best_k = k;
    }
  }
  return best_k;
}

double ReplicationSummary::share(std::size_t k) const {
  const auto it = k_histogram.find(k);
  if (it == k_histogram.end() || replicates == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(replicates);
}

bool same_statistics(const ReplicationSummary& a, const ReplicationSummary& b) {
  return a.replicates == b.replicates && a.k_histogram == b.k_histogram &&
         a.multimodal_rate == b.multimodal_rate && a.mse_mean == b.mse_mean &&
         a.mse_sd == b.mse_sd && a.oracle_mse == b.oracle_mse && a.k_values == b.k_values &&
         a.mse_values == b.mse_values;
}

std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint64_t r) {
  return splitmix64(splitmix64(base_seed) ^ splitmix64(r + 0x632be59bd9b4e019ULL));
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("FUSIONCLUST_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

DataMatrix draw_replicate(const ExperimentSpec& spec, std::size_t r) {
  const std::uint64_t seed = replicate_seed(spec.base_seed, r);
  DataMatrix data(spec.n, spec.dimension());
  for (std::size_t j = 0; j < spec.dimension(); ++j) {
    const std::uint64_t column_seed = j == 0 ? seed : splitmix64(seed + j);
    const std::vector<double> x = sample(spec.mixture[j], spec.n, column_seed);
    std::copy(x.begin(), x.end(), data.column(j).begin());
  }
  return data;
}

ReplicationSummary run_modality_experiment(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.dimension() != 1) throw DomainError("modality experiments are univariate");
  const BmtConfig config = config_of(spec);
  std::vector<Replicate> reps(spec.replicates);
  parallel_for(spec.replicates, spec.threads, [&](std::size_t r) {
    const DataMatrix data = draw_replicate(spec, r);
    const auto start = std::chrono::steady_clock::now();
    const BmtResult res = run_bmt(SortedSample::from_values(data.column(0)), config);
    reps[r].seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    reps[r].k = res.num_clusters;
    reps[r].multimodal = !res.split_points.empty();
  });
  return summarize(reps, std::nullopt);
}

ReplicationSummary run_k_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const BmtConfig config = config_of(spec);
  std::vector<Replicate> reps(spec.replicates);
  parallel_for(spec.replicates, spec.threads, [&](std::size_t r) {
    const DataMatrix data = draw_replicate(spec, r);
    const auto start = std::chrono::steady_clock::now();
    if (spec.dimension() == 1) {
      const BmtResult res = run_bmt(SortedSample::from_values(data.column(0)), config);
      reps[r].k = res.num_clusters;
      reps[r].multimodal = !res.split_points.empty();
    } else {
      const MultivariateBmtResult res = run_bmt_multivariate(data, config);
      reps[r].k = res.joint_cluster_count;
      reps[r].multimodal = res.joint_cluster_count > 1;
    }
    reps[r].seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return summarize(reps, std::nullopt);
}

ReplicationSummary run_scale_experiment(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.dimension() != 1) throw DomainError("scale experiments are univariate");
  const BmtConfig config = config_of(spec);
  std::vector<Replicate> reps(spec.replicates);
  parallel_for(spec.replicates, spec.threads, [&](std::size_t r) {
    const DataMatrix data = draw_replicate(spec, r);
    const auto start = std::chrono::steady_clock::now();
    const BmtResult res = run_bmt(SortedSample::from_values(data.column(0)), config);
    reps[r].seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    reps[r].k = res.num_clusters;
    reps[r].multimodal = !res.split_points.empty();
    reps[r].mse = sample_mse(data.column(0), res.split_points);
  });
  ReplicationSummary s = summarize(reps, interior_minima(spec.mixture.front()).size() + 1);
  s.oracle_mse = oracle_mse(spec.mixture.front());
  return s;
}

double sample_mse(std::span<const double> values, std::span<const double> splits) {
  if (values.empty()) throw DomainError("sample_mse of an empty sample");
  const std::vector<std::size_t> labels = assign_labels(values, splits);
  const std::size_t k = splits.size() + 1;
  std::vector<double> sum(k, 0.0);
  std::vector<double> count(k, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum[labels[i]] += values[i];
    count[labels[i]] += 1.0;
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - sum[labels[i]] / count[labels[i]];
    ss += d * d;
  }
  return ss / static_cast<double>(values.size());
}

double oracle_mse(const MixtureModel& m) {
  const auto [lo, hi] = m.support();
  std::vector<double> cuts{lo};
  for (double d : interior_minima(m)) cuts.push_back(d);
  cuts.push_back(hi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double m0 = m.partial_moment(cuts[i], cuts[i + 1], 0);
    if (!(m0 > 0.0)) continue;
    const double m1 = m.partial_moment(cuts[i], cuts[i + 1], 1);
    const double m2 = m.partial_moment(cuts[i], cuts[i + 1], 2);
    total += m2 - m1 * m1 / m0;
  }
  return total;
}

double hausdorff_distance(const std::vector<SplitTriple>& a, const std::vector<SplitTriple>& b) {
  if (a.empty() || b.empty()) throw DomainError("Hausdorff distance of an empty set");
  const auto dist = [](const SplitTriple& x, const SplitTriple& y) {
    return std::max({std::abs(x.left - y.left), std::abs(x.split - y.split),
                     std::abs(x.right - y.right)});
  };
  const auto directed = [&](const auto& from, const auto& to) {
    double worst = 0.0;
    for (const auto& x : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : to) best = std::min(best, dist(x, y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

double hausdorff_distance(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<SplitTriple> ta;
  std::vector<SplitTriple> tb;
  for (double x : a) ta.push_back({0.0, x, 0.0});
  for (double x : b) tb.push_back({0.0, x, 0.0});
  return hausdorff_distance(ta, tb);
}

ConsistencyReport run_consistency_check(const MixtureModel& m, const std::vector<std::size_t>& n_list,
                                        std::size_t replicates, std::uint64_t base_seed,
                                        double alpha, std::size_t threads) {
  if (n_list.empty()) throw DomainError("consistency check needs at least one sample size");
  if (replicates == 0) throw DomainError("consistency check needs at least one replicate");
  ConsistencyReport report;
  PopulationOptions options;
  options.check_second_split = false;
  const PopulationSplit pop = find_population_split(m, options);
  if (!pop.has_split()) {
    report.status = ConsistencyStatus::no_population_split;
    return report;
  }
  report.population_split = pop.split().s_star;
  const std::vector<double> target{pop.split().s_star};

  for (const std::size_t n : n_list) {
    ExperimentSpec spec{{m}, n, replicates, alpha, base_seed, true, threads};
    spec.validate();
    const BmtConfig config = config_of(spec);
    std::vector<double> errors(replicates);
    parallel_for(replicates, threads, [&](std::size_t r) {
      const DataMatrix data = draw_replicate(spec, r);
      const BmtResult res = run_bmt(SortedSample::from_values(data.column(0)), config);
      errors[r] = res.split_points.empty() ? std::numeric_limits<double>::infinity()
                                           : hausdorff_distance(res.split_points, target);
    });
    report.rows.push_back({n, median(errors)});
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (report.rows[i].median_error > report.rows[i - 1].median_error) {
      report.non_increasing = false;
    }
  }
  return report;
}

std::string to_string(ConsistencyStatus status) {
  return status == ConsistencyStatus::ok ? "ok" : "no_population_split";
}

}  // namespace fusionclust
