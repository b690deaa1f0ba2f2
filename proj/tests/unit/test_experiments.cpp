#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "fusionclust/errors.hpp"
#include "fusionclust/experiments.hpp"
#include "fusionclust/mixture_parser.hpp"
#include "random_samples.hpp"

using namespace fusionclust;

namespace {

ExperimentSpec spec_for(const std::string& mixture, std::size_t n, std::size_t reps) {
  ExperimentSpec spec;
  spec.mixture = parse_product(mixture);
  spec.n = n;
  spec.replicates = reps;
  spec.base_seed = 2024;
  return spec;
}

}  // namespace

TEST(ExperimentSpecTest, Validation) {
  auto spec = spec_for("normal(0,1)", 100, 2);
  EXPECT_NO_THROW(spec.validate());
  spec.n = 0;
  EXPECT_THROW(spec.validate(), DomainError);
  spec = spec_for("normal(0,1)", 100, 0);
  EXPECT_THROW(spec.validate(), DomainError);
  spec = spec_for("normal(0,1)", 100, 2);
  spec.alpha = 0.7;
  EXPECT_THROW(spec.validate(), DomainError);
  spec.mixture.clear();
  spec.alpha = 0.1;
  EXPECT_THROW(spec.validate(), DomainError);
}

TEST(SeedTest, StableAndDistinct) {
  EXPECT_EQ(replicate_seed(7, 3), replicate_seed(7, 3));
  EXPECT_NE(replicate_seed(7, 3), replicate_seed(7, 4));
  EXPECT_NE(replicate_seed(7, 3), replicate_seed(8, 3));
}

TEST(SeedTest, ReplicateDependsOnlyOnSeedAndIndex) {
  const auto spec = spec_for("0.5*normal(-2,1)+0.5*normal(2,1); chisq(1)", 300, 10);
  const auto fifth = draw_replicate(spec, 5);
  for (std::size_t r = 0; r < 5; ++r) draw_replicate(spec, r);
  EXPECT_EQ(draw_replicate(spec, 5), fifth);
  auto more = spec;
  more.replicates = 50;
  more.threads = 3;
  EXPECT_EQ(draw_replicate(more, 5), fifth);
  EXPECT_NE(draw_replicate(spec, 6), fifth);
  EXPECT_EQ(fifth.rows(), 300u);
  EXPECT_EQ(fifth.cols(), 2u);
}

TEST(ExperimentsProperty, DeterministicAcrossThreadCounts) {
  auto spec = spec_for("normal(-2.5,1)+normal(0,1)+normal(2.5,1)", 2000, 8);
  spec.threads = 1;
  const auto serial_k = run_k_experiment(spec);
  const auto serial_scale = run_scale_experiment(spec);
  const auto serial_modality = run_modality_experiment(spec);
  for (std::size_t threads : {2u, 4u}) {
    spec.threads = threads;
    EXPECT_TRUE(same_statistics(run_k_experiment(spec), serial_k));
    EXPECT_TRUE(same_statistics(run_scale_experiment(spec), serial_scale));
    EXPECT_TRUE(same_statistics(run_modality_experiment(spec), serial_modality));
  }
}

TEST(ExperimentsTest, HistogramSumsToReplicates) {
  const auto s = run_k_experiment(spec_for("0.3*normal(-4,1)+0.7*normal(4,1)", 2000, 6));
  std::size_t total = 0;
  for (const auto& [k, count] : s.k_histogram) total += count;
  EXPECT_EQ(total, 6u);
  EXPECT_EQ(s.k_values.size(), 6u);
  EXPECT_EQ(s.modal_k(), 2u);
  EXPECT_DOUBLE_EQ(s.share(2), static_cast<double>(s.k_histogram.at(2)) / 6.0);
}

TEST(ExperimentsTest, ProductMixtureCountsJointClusters) {
  const auto s = run_k_experiment(spec_for(
      "0.5*normal(-5,1)+0.5*normal(5,1); 0.5*normal(-5,1)+0.5*normal(5,1); normal(0,1)", 2000, 4));
  EXPECT_EQ(s.modal_k(), 4u);
}

TEST(ExperimentsTest, ScaleExperimentRejectsProducts) {
  EXPECT_THROW(run_scale_experiment(spec_for("normal(0,1); normal(0,1)", 100, 2)), DomainError);
}

TEST(MseTest, HandComputed) {
  const std::vector<double> values{0.0, 2.0, 10.0, 14.0};
  EXPECT_DOUBLE_EQ(sample_mse(values, std::vector<double>{5.0}), (1.0 + 1.0 + 4.0 + 4.0) / 4.0);
  const double mean = 6.5;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  EXPECT_DOUBLE_EQ(sample_mse(values, std::vector<double>{}), ss / 4.0);
}

TEST(MseTest, OracleForUnimodalIsVariance) {
  EXPECT_NEAR(oracle_mse(parse_mixture("normal(3,2)")), 4.0, 1e-10);
}

TEST(MseTest, OracleForSymmetricMixture) {
  const auto m = parse_mixture("normal(-2,1)+normal(2,1)");
  const double mu = truncated_mean(m, 0.0, std::numeric_limits<double>::infinity());
  EXPECT_NEAR(oracle_mse(m), 5.0 - mu * mu, 1e-10);
}

TEST(MseTest, SampleMseAboveOracle) {
  auto spec = spec_for("normal(-2.5,1)+normal(0,1)+normal(2.5,1)", 10000, 5);
  const auto s = run_scale_experiment(spec);
  ASSERT_TRUE(s.oracle_mse.has_value());
  for (double mse : s.mse_values) EXPECT_GE(mse, *s.oracle_mse - 0.02);
}

TEST(MseTest, MeanCountsOnlyReplicatesWithTrueK) {
  auto spec = spec_for("normal(-2.5,1)+normal(0,1)+normal(2.5,1)", 2000, 6);
  spec.replicates = 12;
  const auto s = run_scale_experiment(spec);
  ASSERT_EQ(s.true_k, 3u);
  ASSERT_EQ(s.mse_values.size(), 12u);
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < s.k_values.size(); ++r) {
    if (s.k_values[r] != 3) continue;
    sum += s.mse_values[r];
    ++hits;
  }
  ASSERT_GT(hits, 0u);
  ASSERT_TRUE(s.mse_mean.has_value());
  EXPECT_NEAR(*s.mse_mean, sum / static_cast<double>(hits), 1e-12);

  spec.mixture = {parse_mixture("normal(0,1)")};
  EXPECT_EQ(run_scale_experiment(spec).true_k, 1u);
}

TEST(HausdorffTest, Examples) {
  const std::vector<SplitTriple> a{{0.0, 1.0, 2.0}};
  const std::vector<SplitTriple> b{{0.0, 1.0, 3.0}};
  EXPECT_DOUBLE_EQ(hausdorff_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(hausdorff_distance(a, b), 1.0);
  EXPECT_DOUBLE_EQ(hausdorff_distance(b, a), 1.0);
  EXPECT_DOUBLE_EQ(hausdorff_distance(std::vector<double>{0.0, 5.0}, std::vector<double>{0.5}),
                   4.5);
  EXPECT_THROW(hausdorff_distance(a, std::vector<SplitTriple>{}), DomainError);
  EXPECT_THROW(hausdorff_distance(std::vector<double>{}, std::vector<double>{1.0}), DomainError);
}

TEST(ConsistencyTest, UnimodalIsSkipped) {
  const auto report = run_consistency_check(parse_mixture("normal(0,1)"), {1000}, 3, 1);
  EXPECT_EQ(report.status, ConsistencyStatus::no_population_split);
  EXPECT_TRUE(report.rows.empty());
  EXPECT_EQ(to_string(report.status), "no_population_split");
}

TEST(ConsistencyTest, SmallRunOnBimodalMixture) {
  const auto report =
      run_consistency_check(parse_mixture("normal(-2,1)+normal(2,1)"), {1000, 10000}, 6, 3);
  EXPECT_EQ(report.status, ConsistencyStatus::ok);
  ASSERT_TRUE(report.population_split.has_value());
  EXPECT_NEAR(*report.population_split, 0.0, 1e-6);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_LT(report.rows[1].median_error, 0.5);
}
