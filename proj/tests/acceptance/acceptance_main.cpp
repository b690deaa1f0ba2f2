// Acceptance suite: one PASS/FAIL line per criterion, detail lines indented.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fusionclust/bmt.hpp"
#include "fusionclust/experiments.hpp"
#include "fusionclust/fusion_path.hpp"
#include "fusionclust/mixture.hpp"
#include "fusionclust/mixture_parser.hpp"
#include "fusionclust/population.hpp"
#include "fusionclust/quadrature.hpp"
#include "random_samples.hpp"

using namespace fusionclust;

namespace {

// Tolerances and desk-scale settings.
constexpr double kTable1Location = 0.02;
constexpr double kTable1Excess = 0.002;
constexpr double kLambdaRelTol = 1e-12;
constexpr double kCentroidTol = 1e-9;
constexpr double kScalingRatioMax = 15.0;
constexpr double kConsistencyMax = 0.15;
constexpr double kQuadratureTol = 1e-8;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = false;
  std::string summary;
};

struct Criterion {
  int id;
  std::string title;
  std::function<Outcome()> run;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt("%7.3f", *v) : std::string("     NO");
}

// ---------------------------------------------------------------------------
// Published two-normal population table: p1, mu2 (= -mu1), d_min, s*, L*, R*,
// s_MC, Excess MCE. Empty optionals mark rows reported without a split.

struct PublishedRow {
  double p1;
  double mu2;
  double d_min;
  std::optional<double> s, L, R;
  double s_mc;
  double excess;
  bool gated;
};

constexpr std::nullopt_t NO = std::nullopt;

const std::vector<PublishedRow>& published_rows() {
  static const std::vector<PublishedRow> rows{
      {0.50, 4.50, 0.00, 0.00, -8.99, 8.99, 0.00, 0.000, true},
      {0.45, 4.50, -0.02, -0.45, -8.53, 9.43, -0.02, 0.000, false},
      {0.40, 4.50, -0.05, -0.90, -8.08, 9.88, -0.04, 0.000, false},
      {0.35, 4.50, -0.07, -1.36, -7.62, 10.33, -0.07, 0.000, false},
      {0.30, 4.50, -0.10, -1.82, -7.17, 10.79, -0.09, 0.001, true},
      {0.25, 4.50, -0.13, -2.31, -6.67, 11.24, -0.12, 0.004, false},
      {0.20, 4.50, -0.16, -2.90, -6.09, 11.70, -0.15, 0.011, false},
      {0.15, 4.50, -0.20, -3.82, -5.09, 12.16, -0.19, 0.037, false},
      {0.10, 4.50, -0.26, NO, NO, NO, -0.24, 0.100, true},
      {0.50, 4.00, 0.00, 0.00, -7.99, 7.99, 0.00, 0.000, true},
      {0.45, 4.00, -0.03, -0.40, -7.58, 8.38, -0.03, 0.000, false},
      {0.40, 4.00, -0.05, -0.80, -7.17, 8.78, -0.05, 0.000, false},
      {0.35, 4.00, -0.08, -1.22, -6.77, 9.19, -0.08, 0.001, false},
      {0.30, 4.00, -0.11, -1.64, -6.34, 9.59, -0.11, 0.003, true},
      {0.25, 4.00, -0.15, -2.12, -5.86, 9.99, -0.14, 0.008, false},
      {0.20, 4.00, -0.18, -2.72, -5.25, 10.40, -0.17, 0.020, false},
      {0.15, 4.00, -0.23, NO, NO, NO, -0.22, 0.150, false},
      {0.10, 4.00, -0.29, NO, NO, NO, -0.28, 0.100, true},
      {0.50, 3.50, 0.00, 0.00, -6.98, 6.98, 0.00, 0.000, true},
      {0.45, 3.50, -0.03, -0.35, -6.63, 7.34, -0.03, 0.000, false},
      {0.40, 3.50, -0.06, -0.71, -6.27, 7.69, -0.06, 0.001, false},
      {0.35, 3.50, -0.10, -1.09, -5.90, 8.04, -0.09, 0.003, false},
      {0.30, 3.50, -0.13, -1.49, -5.49, 8.39, -0.12, 0.007, true},
      {0.25, 3.50, -0.17, -1.97, -5.01, 8.75, -0.16, 0.016, false},
      {0.20, 3.50, -0.22, -2.66, -4.32, 9.12, -0.20, 0.040, false},
      {0.15, 3.50, -0.27, NO, NO, NO, -0.25, 0.150, false},
      {0.10, 3.50, -0.34, NO, NO, NO, -0.31, 0.100, true},
      {0.50, 3.00, 0.00, 0.00, -5.99, 5.99, 0.00, 0.000, true},
      {0.45, 3.00, -0.04, -0.32, -5.66, 6.28, -0.03, 0.001, false},
      {0.40, 3.00, -0.08, -0.64, -5.34, 6.59, -0.07, 0.004, false},
      {0.35, 3.00, -0.12, -0.99, -4.99, 6.89, -0.10, 0.008, false},
      {0.30, 3.00, -0.16, -1.39, -4.59, 7.20, -0.14, 0.016, true},
      {0.25, 3.00, -0.21, -1.91, -4.07, 7.52, -0.18, 0.034, false},
      {0.20, 3.00, -0.26, NO, NO, NO, -0.23, 0.200, false},
      {0.15, 3.00, -0.33, NO, NO, NO, -0.29, 0.150, false},
      {0.10, 3.00, -0.41, NO, NO, NO, -0.37, 0.100, true},
      {0.50, 2.50, 0.00, 0.00, -4.97, 4.97, 0.00, 0.000, true},
      {0.45, 2.50, -0.05, -0.30, -4.68, 5.23, -0.04, 0.005, false},
      {0.40, 2.50, -0.10, -0.61, -4.37, 5.49, -0.08, 0.011, false},
      {0.35, 2.50, -0.15, -0.96, -4.01, 5.75, -0.12, 0.021, false},
      {0.30, 2.50, -0.20, -1.41, -3.56, 6.02, -0.17, 0.041, false},
      {0.25, 2.50, -0.26, NO, NO, NO, -0.22, 0.250, false},
      {0.20, 2.50, -0.33, NO, NO, NO, -0.28, 0.200, false},
      {0.15, 2.50, -0.41, NO, NO, NO, -0.35, 0.149, false},
      {0.10, 2.50, -0.53, NO, NO, NO, -0.44, 0.100, false},
      {0.50, 2.00, 0.00, 0.00, -3.89, 3.89, 0.00, 0.000, true},
      {0.45, 2.00, -0.07, -0.32, -3.62, 4.15, -0.05, 0.015, false},
      {0.40, 2.00, -0.14, -0.67, -3.28, 4.38, -0.10, 0.034, false},
      {0.35, 2.00, -0.21, -1.12, -2.85, 4.62, -0.15, 0.065, false},
      {0.30, 2.00, -0.28, NO, NO, NO, -0.21, 0.298, false},
      {0.25, 2.00, -0.37, NO, NO, NO, -0.28, 0.248, false},
      {0.20, 2.00, -0.47, NO, NO, NO, -0.35, 0.198, false},
      {0.15, 2.00, -0.58, NO, NO, NO, -0.43, 0.148, false},
      {0.10, 2.00, -0.74, NO, NO, NO, -0.55, 0.097, false},
      {0.50, 1.50, 0.00, 0.00, -2.68, 2.68, 0.00, 0.000, true},
      {0.45, 1.50, -0.12, -0.50, -2.29, 2.97, -0.07, 0.057, false},
      {0.40, 1.50, -0.24, NO, NO, NO, -0.14, 0.396, false},
      {0.35, 1.50, -0.38, NO, NO, NO, -0.21, 0.344, false},
      {0.30, 1.50, -0.53, NO, NO, NO, -0.28, 0.293, false},
      {0.25, 1.50, -0.71, NO, NO, NO, -0.37, 0.241, false},
      {0.20, 1.50, -1.50, NO, NO, NO, -0.46, 0.190, false},
      {0.15, 1.50, -1.50, NO, NO, NO, -0.58, 0.139, false},
      {0.10, 1.50, -1.50, NO, NO, NO, -0.73, 0.090, false},
  };
  return rows;
}

bool close(const std::optional<double>& a, const std::optional<double>& b, double tol) {
  if (a.has_value() != b.has_value()) return false;
  return !a || std::abs(*a - *b) <= tol;
}

bool row_matches(const PublishedRow& p, const Table1Row& r) {
  return close(p.d_min, r.d_min, kTable1Location) && close(p.s, r.s_star, kTable1Location) &&
         close(p.L, r.L_star, kTable1Location) && close(p.R, r.R_star, kTable1Location) &&
         std::abs(p.s_mc - r.s_mc) <= kTable1Location &&
         std::abs(p.excess - r.excess_mce) <= kTable1Excess &&
         (!r.second_split || !*r.second_split);
}

void print_row(const char* tag, const PublishedRow& p, const Table1Row& r) {
  std::printf("    %s %.2f/%.2f |d|=%.0f  d_min %s/%s  s %s/%s  L %s/%s  R %s/%s  "
              "s_mc %7.3f/%7.3f  excess %.3f/%.3f\n",
              tag, p.p1, 1.0 - p.p1, 2 * p.mu2, fmt_opt(p.d_min).c_str(), fmt_opt(r.d_min).c_str(),
              fmt_opt(p.s).c_str(), fmt_opt(r.s_star).c_str(), fmt_opt(p.L).c_str(),
              fmt_opt(r.L_star).c_str(), fmt_opt(p.R).c_str(), fmt_opt(r.R_star).c_str(), p.s_mc,
              r.s_mc, p.excess, r.excess_mce);
}

Outcome criterion_table1() {
  std::size_t gated = 0, matched = 0;
  std::size_t blocks_seen = 0;
  double last_block = -1.0;
  for (const auto& p : published_rows()) {
    if (!p.gated) continue;
    ++gated;
    if (p.mu2 != last_block) {
      ++blocks_seen;
      last_block = p.mu2;
    }
    const Table1Row r = table1_row(p.p1, -p.mu2, p.mu2);
    const bool ok = row_matches(p, r);
    matched += ok ? 1 : 0;
    print_row(ok ? "ok  " : "MISS", p, r);
  }
  return {matched == gated && blocks_seen == 7,
          fmt("%zu/%zu gated rows across %zu blocks within +-%.2f (locations) and +-%.3f (excess)",
              matched, gated, blocks_seen, kTable1Location, kTable1Excess)};
}

void table1_full_report() {
  std::printf("  informational: full two-normal table (published/computed), not gating\n");
  std::size_t agree = 0;
  for (const auto& p : published_rows()) {
    const Table1Row r = table1_row(p.p1, -p.mu2, p.mu2);
    const bool ok = row_matches(p, r);
    agree += ok ? 1 : 0;
    print_row(ok ? "ok  " : "diff", p, r);
  }
  std::printf("  informational: %zu/%zu rows agree within the criterion 1 tolerances\n", agree,
              published_rows().size());
}

// ---------------------------------------------------------------------------

Outcome criterion_lambda_monotone() {
  std::mt19937_64 rng(kSeed + 2);
  std::uniform_int_distribution<std::size_t> size(2, 1000);
  std::size_t bad = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto values = test_support::random_continuous_sample(rng, size(rng), trial);
    const auto path = build_merge_path(SortedSample::from_values(values));
    const auto& ev = path.events();
    for (std::size_t i = 1; i < ev.size(); ++i) {
      if (ev[i].lambda < ev[i - 1].lambda * (1.0 - kLambdaRelTol)) {
        ++bad;
        break;
      }
    }
  }
  return {bad == 0, fmt("%zu/500 samples with a decreasing lambda step", bad)};
}

Outcome criterion_oracle() {
  std::mt19937_64 rng(kSeed + 3);
  std::uniform_int_distribution<std::size_t> size(1, 12);
  std::size_t bad = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto sample =
        SortedSample::from_values(test_support::random_continuous_sample(rng, size(rng), trial));
    const auto merged = build_merge_path(sample);
    const auto split = split_sequence_oracle(sample);
    bool same = merged.events().size() == split.events().size();
    for (std::size_t i = 0; same && i < merged.events().size(); ++i) {
      const auto& a = merged.events()[i];
      const auto& b = split.events()[i];
      same = a.lambda == b.lambda && a.first == b.first && a.split == b.split && a.last == b.last;
    }
    bad += same ? 0 : 1;
  }
  return {bad == 0, fmt("%zu/500 samples where the merge path and split oracle differ", bad)};
}

Outcome criterion_centroids() {
  std::mt19937_64 rng(kSeed + 4);
  std::uniform_int_distribution<std::size_t> size(2, 300);
  std::size_t bad_collision = 0, bad_order = 0, bad_zero = 0;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto sample =
        SortedSample::from_values(test_support::random_continuous_sample(rng, size(rng), trial));
    const auto path = build_merge_path(sample);
    if (centroids_at(path, 0.0) != sample.expanded()) ++bad_zero;
    bool collided = true, ordered = true;
    for (std::size_t k = 0; k < path.events().size(); ++k) {
      const auto& e = path.events()[k];
      const auto parts = path.partition_after(k);
      const auto it = std::find_if(parts.begin(), parts.end(),
                                   [&](const EntryRange& r) { return r.first == e.first; });
      const auto idx = static_cast<std::size_t>(it - parts.begin());
      const auto c = cluster_centroids(path, k, e.lambda);
      const double gap = std::abs(c[idx] - c[idx + 1]);
      worst_gap = std::max(worst_gap, gap);
      if (gap > kCentroidTol) collided = false;
      const auto all = centroids_at(path, e.lambda);
      if (!std::is_sorted(all.begin(), all.end())) ordered = false;
    }
    bad_collision += collided ? 0 : 1;
    bad_order += ordered ? 0 : 1;
  }
  return {bad_collision == 0 && bad_order == 0 && bad_zero == 0,
          fmt("100 paths: %zu collision failures (worst gap %.2e), %zu order failures, "
              "%zu lambda=0 failures",
              bad_collision, worst_gap, bad_order, bad_zero)};
}

// ---------------------------------------------------------------------------

ExperimentSpec desk_spec(const std::string& mixture, std::size_t n, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.mixture = parse_product(mixture);
  spec.n = n;
  spec.replicates = 20;
  spec.base_seed = seed;
  return spec;
}

Outcome criterion_table2() {
  struct Case {
    const char* mixture;
    double lo, hi;
  };
  const std::vector<Case> cases{
      {"normal(0,1)", 0.0, 0.0},
      {"beta(2,4)", 0.0, 0.0},
      {"normal(-2.5,1)+normal(0,1)+normal(2.5,1)", 0.85, 1.0},
      {"normal(-1.1,1)+normal(1.1,1)", 0.40, 0.95},
  };
  bool pass = true;
  std::string rates;
  std::uint64_t seed = kSeed + 50;
  for (const auto& c : cases) {
    const auto s = run_modality_experiment(desk_spec(c.mixture, 10000, seed++));
    const bool ok = s.multimodal_rate >= c.lo && s.multimodal_rate <= c.hi;
    pass = pass && ok;
    std::printf("    %-45s rate %.2f  required [%.2f, %.2f]\n", c.mixture, s.multimodal_rate, c.lo,
                c.hi);
    rates += fmt("%s%.2f", rates.empty() ? "" : " ", s.multimodal_rate);
  }
  return {pass, "multimodal rates " + rates};
}

Outcome criterion_table3() {
  struct Case {
    const char* mixture;
    std::size_t k;
  };
  const std::vector<Case> cases{
      {"0.3*normal(-4,1)+0.7*normal(4,1)", 2},
      {"0.3*normal(-3,1)+0.35*normal(0,1)+0.35*normal(3,1)", 3},
      {"0.3*t(1,-3)+0.35*t(1,0)+0.35*t(1,3)", 3},
      {"0.3*dexp(-3,1)+0.35*dexp(0,1)+0.35*dexp(3,1)", 3},
      {"beta(8,2)+beta(5,5)+beta(2,8)", 3},
      {"0.5*normal(-2,1)+0.5*normal(2,1); normal(0,1); normal(0,1); chisq(1); chisq(1)", 2},
  };
  bool pass = true;
  std::size_t passed = 0;
  std::uint64_t seed = kSeed + 60;
  for (const auto& c : cases) {
    const auto s = run_k_experiment(desk_spec(c.mixture, 5000, seed++));
    const bool ok = s.modal_k() == c.k && s.share(c.k) >= 0.80;
    pass = pass && ok;
    passed += ok ? 1 : 0;
    std::string hist;
    for (const auto& [k, count] : s.k_histogram) hist += fmt(" k=%zu:%zu", k, count);
    std::printf("    %-80s true k=%zu  modal k=%zu share %.2f |%s\n", c.mixture, c.k, s.modal_k(),
                s.share(c.k), hist.c_str());
  }
  return {pass, fmt("%zu/6 scenarios with modal k = true k and share >= 0.80", passed)};
}

Outcome criterion_table4() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto three = desk_spec("normal(-2.5,1)+normal(0,1)+normal(2.5,1)", 10000, kSeed + 70);
  const auto a = run_scale_experiment(three);
  const double mse3 = a.mse_mean.value_or(nan);
  const double oracle3 = a.oracle_mse.value_or(nan);
  const bool mse_ok = std::abs(mse3 - 0.6817) <= 0.02;
  const bool oracle_ok = std::abs(oracle3 - 0.6564) <= 0.005;
  std::printf("    3-component n=1e4: k=3 in %.0f/20  MSE %.4f (target 0.6817 +-0.02)  oracle %.4f "
              "(target 0.6564 +-0.005)\n",
              a.share(3) * 20.0, mse3, oracle3);

  auto five = desk_spec("normal(-8,1)+normal(-4,1)+normal(0,1)+normal(4,1)+normal(8,1)", 100000,
                        kSeed + 71);
  const auto b = run_scale_experiment(five);
  const std::size_t hits = b.k_histogram.count(5) ? b.k_histogram.at(5) : 0;
  const double mse5 = b.mse_mean.value_or(nan);
  const bool k_ok = hits >= 19;
  const bool mse5_ok = std::abs(mse5 - 0.8909) <= 0.01;
  std::printf("    5-component n=1e5: k=5 in %zu/20  MSE %.4f (target 0.8909 +-0.01)  "
              "oracle %.4f\n",
              hits, mse5, b.oracle_mse.value_or(nan));
  return {mse_ok && oracle_ok && k_ok && mse5_ok,
          fmt("MSE %.4f, oracle %.4f, k=5 in %zu/20, MSE %.4f (MSE over replicates with the true k)",
              mse3, oracle3, hits, mse5)};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome criterion_scaling() {
  std::mt19937_64 rng(kSeed + 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto time_path = [&](std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    const auto sample = SortedSample::from_values(v);
    const auto start = std::chrono::steady_clock::now();
    const auto path = build_merge_path(sample);
    const auto stop = std::chrono::steady_clock::now();
    if (path.events().empty()) std::abort();
    return std::chrono::duration<double>(stop - start).count();
  };
  std::vector<double> small, large;
  for (int i = 0; i < 9; ++i) {
    small.push_back(time_path(10000));
    large.push_back(time_path(100000));
  }
  const double ratio = median(large) / median(small);
  return {ratio <= kScalingRatioMax,
          fmt("median %.2f ms (n=1e4), %.2f ms (n=1e5), ratio %.2f (limit %.0f)",
              1e3 * median(small), 1e3 * median(large), ratio, kScalingRatioMax)};
}

Outcome criterion_consistency() {
  const auto m = parse_mixture("0.5*normal(-2,1)+0.5*normal(2,1)");
  const auto r = run_consistency_check(m, {1000, 10000, 100000}, 20, kSeed + 9);
  std::string medians;
  for (const auto& row : r.rows) medians += fmt(" n=%zu:%.4f", row.n, row.median_error);
  const bool ok = r.status == ConsistencyStatus::ok && r.rows.size() == 3 && r.non_increasing &&
                  r.rows.back().median_error < kConsistencyMax;
  return {ok, "median |s_hat - s*|" + medians};
}

Outcome criterion_numeric() {
  std::mt19937_64 rng(kSeed + 10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto m = test_support::random_normal_mixture(rng);
    const double l = m.quantile(0.001 + 0.6 * u(rng));
    const double r = m.quantile(std::min(0.999, m.cdf(l) + 0.05 + 0.5 * u(rng)));
    const double mass = integrate([&](double x) { return m.density(x); }, l, r, 1e-13).value;
    const double first =
        integrate([&](double x) { return x * m.density(x); }, l, r, 1e-13).value;
    worst = std::max(worst, std::abs(truncated_mean(m, l, r) - first / mass));
  }
  std::size_t checked = 0, mismatched = 0;
  while (checked < 200) {
    const auto m = test_support::random_normal_mixture(rng);
    const double L = m.quantile(0.001 + 0.3 * u(rng));
    const double R = m.quantile(0.7 + 0.299 * u(rng));
    const double a = L + (R - L) * (0.05 + 0.9 * u(rng));
    const double h = 1e-5 * (R - L);
    const double slope = (criterion_G(m, L, R, a + h) - criterion_G(m, L, R, a - h)) / (2 * h);
    if (std::abs(slope) < 1e-6) continue;  // sign not resolvable by the difference quotient
    ++checked;
    if ((normalized_derivative_H(m, L, R, a) > 0.0) != (slope > 0.0)) ++mismatched;
  }
  return {worst <= kQuadratureTol && mismatched == 0,
          fmt("truncated mean worst |closed form - quadrature| %.2e over 100 cases; "
              "H sign mismatches %zu/200",
              worst, mismatched)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "two-normal population table", criterion_table1},
      {2, "merge path lambda monotonicity", criterion_lambda_monotone},
      {3, "merge path equals split oracle", criterion_oracle},
      {4, "centroid dynamics", criterion_centroids},
      {5, "multimodality detection rates", criterion_table2},
      {6, "detected number of clusters", criterion_table3},
      {7, "large-sample MSE", criterion_table4},
      {8, "path construction scaling", criterion_scaling},
      {9, "split point consistency trend", criterion_consistency},
      {10, "numeric cross-checks", criterion_numeric},
  };

  std::size_t passed = 0;
  for (const auto& c : criteria) {
    std::printf("criterion %d: %s\n", c.id, c.title.c_str());
    std::fflush(stdout);
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    passed += o.pass ? 1 : 0;
    std::printf("%s  criterion %2d  %-32s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id,
                c.title.c_str(), o.summary.c_str(), secs);
    std::fflush(stdout);
  }

  table1_full_report();

  std::printf("%zu/%zu criteria passed\n", passed, criteria.size());
  return passed == criteria.size() ? 0 : 1;
}
