#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "fusionclust/mixture.hpp"

namespace fusionclust {

/// (L, s, R): cluster (L, R) split at s.
struct SplitTriple {
  double left = 0.0;
  double split = 0.0;
  double right = 0.0;

  friend bool operator==(const SplitTriple&, const SplitTriple&) = default;
};

struct NoSplit {
  std::optional<double> d_min;

  friend bool operator==(const NoSplit&, const NoSplit&) = default;
};

struct Split {
  double L_star = 0.0;
  double s_star = 0.0;
  double R_star = 0.0;
  std::optional<double> d_min;

  friend bool operator==(const Split&, const Split&) = default;
};

/// Outcome of the population clustering procedure for a mixture.
struct PopulationSplit {
  std::variant<NoSplit, Split> outcome;
  bool second_split_found = false;

  bool has_split() const noexcept { return std::holds_alternative<Split>(outcome); }
  const Split& split() const { return std::get<Split>(outcome); }
  std::optional<double> d_min() const;
  SplitTriple triple() const;

  friend bool operator==(const PopulationSplit&, const PopulationSplit&) = default;
};

struct PopulationOptions {
  /// Step of the L grid. Defaults to 1e-3 times the interquartile range.
  std::optional<double> grid_step;
  /// Unbounded supports start at these quantiles.
  double start_quantile = 1e-6;
  /// Grid used to bracket interior stationary points of G.
  std::size_t interior_grid = 512;
  /// Bisection tolerance for R_L, s and L*.
  double tolerance = 1e-10;
  /// Recurse into the bimodal sub-cluster to look for a second split.
  bool check_second_split = true;
};

/// Conditional mean, mass and first moment of the mixture on an interval.
struct IntervalMoments {
  double mass = 0.0;
  double first = 0.0;

  double mean() const { return first / mass; }
};

IntervalMoments interval_moments(const MixtureModel& m, double l, double r);

/// G_{L,R}(a) = mu_{a,R} - mu_{L,a}; G(L) = mu_{L,R} - L, G(R) = R - mu_{L,R}.
/// Throws DomainError unless L <= a <= R and the sub-intervals carry mass.
double criterion_G(const MixtureModel& m, double L, double R, double a);

/// Sign-equivalent form of dG/da for normal mixtures:
///   H(a) = mu_{L,R} P_{L,a}^2 + (P_{a,R} - P_{L,a}) int_L^a x f - a P_{L,a} P_{a,R}.
/// Throws UnsupportedKindError for non-normal components, DomainError
/// unless L < a < R.
double normalized_derivative_H(const MixtureModel& m, double L, double R, double a);

/// F(L, R) = mu_{L,R} - (L + R) / 2 = (G(L) - G(R)) / 2.
double balance_F(const MixtureModel& m, double L, double R);

/// Largest root R_L <= R_hint of F(L, .) = 0, by a downward scan for a sign
/// change and bisection. `scan_step` <= 0 selects (R_hint - L) / 1000.
/// Throws NoBalanceError when no root exists in (L, R_hint].
double solve_R_given_L(const MixtureModel& m, double L, double R_hint, double scan_step = 0.0,
                       double tolerance = 1e-10);

/// Interior local maximum of G_{L,R} with the largest criterion value, if any.
std::optional<double> interior_maximizer(const MixtureModel& m, double L, double R,
                                         std::size_t grid = 512, double tolerance = 1e-10);

/// Runs the population clustering procedure up to its first split: the
/// support is truncated along the balance curve (L, R_L) until an interior
/// maximizer s of G satisfies mu_{L,s} < (L+s)/2 and mu_{s,R} > (s+R)/2;
/// the crossing is then refined by bisection in L. Returns NoSplit when
/// the truncated interval no longer contains a density minimum or the
/// curve collapses.
PopulationSplit find_population_split(const MixtureModel& m, const PopulationOptions& options = {});

/// All population splits, found by recursing into both sub-clusters of
/// every split.
std::vector<SplitTriple> find_population_splits(const MixtureModel& m,
                                                const PopulationOptions& options = {});

/// min(P_{L,s}, P_{s,R}). Throws DomainError unless L < s < R.
double split_size(const MixtureModel& m, double L, double s, double R);

struct McReport {
  double s_mc = 0.0;
  double mce_oracle = 0.0;
  double mce_procedure = 0.0;
  double excess = 0.0;

  friend bool operator==(const McReport&, const McReport&) = default;
};

/// Misclassification of the population split relative to the Bayes
/// boundary s_mc (w1 f1 = w2 f2 between the component centers).
/// MCE(s) = w1 P(X1 > s) + w2 P(X2 <= s); without a split everything goes
/// to the majority component, MCE = min(w1, w2).
/// Throws UnsupportedKindError unless the mixture has exactly two components.
McReport misclassification_analysis(const MixtureModel& m, const PopulationSplit& split);

/// One row of the two-normal population table.
struct Table1Row {
  double p1 = 0.0;
  double p2 = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  std::optional<double> d_min;
  std::optional<double> s_star;
  std::optional<double> L_star;
  std::optional<double> R_star;
  std::optional<bool> second_split;
  double s_mc = 0.0;
  double excess_mce = 0.0;

  friend bool operator==(const Table1Row&, const Table1Row&) = default;
};

/// Solves p1 N(mu1, 1) + (1 - p1) N(mu2, 1).
Table1Row table1_row(double p1, double mu1, double mu2, const PopulationOptions& options = {});
/// Same for an arbitrary two-component mixture.
Table1Row table1_row(const MixtureModel& m, const PopulationOptions& options = {});

/// The 7 separations x 9 mixing proportions grid of two-normal mixtures.
std::vector<Table1Row> table1_grid(const PopulationOptions& options = {});

}  // namespace fusionclust
