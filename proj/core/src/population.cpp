#include "fusionclust/population.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "fusionclust/errors.hpp"

namespace fusionclust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double bisect(auto&& positive_at, double lo, double hi, double tolerance) {
  // positive_at(lo) is true, positive_at(hi) is false.
  for (int i = 0; i < 200 && hi - lo > tolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (positive_at(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double default_step(const MixtureModel& m) {
  const double iqr = m.quantile(0.75) - m.quantile(0.25);
  return 1e-3 * (iqr > 0.0 ? iqr : 1.0);
}

std::optional<double> minimum_inside(const std::vector<double>& minima, double l, double r,
                                     double near) {
  std::optional<double> best;
  for (double d : minima) {
    if (d > l && d < r && (!best || std::abs(d - near) < std::abs(*best - near))) best = d;
  }
  return best;
}

struct ScanOutcome {
  bool split = false;
  double L = 0.0;
  double s = 0.0;
  double R = 0.0;
};

// Truncation of the interval (lo, cap) along the balance curve. With a
// finite cap, R stays pinned at the cap while F(L, cap) >= 0.
class Scanner {
 public:
  Scanner(const MixtureModel& m, const PopulationOptions& options, double step,
          const std::vector<double>& minima)
      : m_(m), options_(options), step_(step), minima_(minima) {}

  ScanOutcome run(double lo, double hint, double cap) const {
    double L = lo;
    double R = 0.0;
    if (!right_end(L, hint, cap, R)) return {};
    std::optional<double> s;
    if (!has_minimum(L, R)) return {};
    if (stops(L, R, cap, s)) return {true, L, *s, R};
    for (;;) {
      const double next = L + step_;
      double next_R = 0.0;
      if (!right_end(next, R, cap, next_R) || next_R - next < 2.0 * step_) return {};
      if (!has_minimum(next, next_R)) return {};
      std::optional<double> next_s;
      if (stops(next, next_R, cap, next_s)) return refine(L, R, next, next_R, *next_s, cap);
      L = next;
      R = next_R;
    }
  }

 private:
  bool right_end(double L, double hint, double cap, double& R) const {
    if (std::isfinite(cap) && balance_F(m_, L, cap) >= 0.0) {
      R = cap;
      return true;
    }
    // R_L can move up as L advances; follow the branch through `hint`.
    double upper = std::min(hint, cap);
    if (upper > L && balance_F(m_, L, upper) > 0.0) {
      double grow = std::max(step_, 1e-3 * (upper - L));
      while (balance_F(m_, L, upper) > 0.0) {
        if (upper == cap) {
          R = cap;
          return true;
        }
        upper = std::min(upper + grow, cap);
        grow *= 2.0;
      }
      const double scan = std::min(grow, upper - L) * 0.5;
      try {
        R = solve_R_given_L(m_, L, upper, scan, options_.tolerance);
        return true;
      } catch (const NoBalanceError&) {
        return false;
      }
    }
    try {
      R = solve_R_given_L(m_, L, upper, 0.0, options_.tolerance);
      return true;
    } catch (const NoBalanceError&) {
      return false;
    }
  }

  bool has_minimum(double L, double R) const {
    return std::any_of(minima_.begin(), minima_.end(), [&](double d) { return d > L && d < R; });
  }

  // The truncation stops once an interior maximizer s of G beats the
  // endpoints: on the balance curve this is the sign pattern of
  // (mu_{L,s} - (L+s)/2, mu_{s,R} - (s+R)/2); with R pinned it is
  // G(s) >= G(L).
  bool stops(double L, double R, double cap, std::optional<double>& s) const {
    s = interior_maximizer(m_, L, R, grid_size(), options_.tolerance);
    if (!s) return false;
    if (R == cap && balance_F(m_, L, cap) > 0.0) {
      return criterion_G(m_, L, R, *s) >= criterion_G(m_, L, R, L);
    }
    return balance_F(m_, L, *s) < 0.0 && balance_F(m_, *s, R) > 0.0;
  }

  ScanOutcome refine(double L_lo, double R_lo, double L_hi, double R_hi, double s_hi,
                     double cap) const {
    for (int i = 0; i < 200 && L_hi - L_lo > options_.tolerance; ++i) {
      const double mid = 0.5 * (L_lo + L_hi);
      if (mid <= L_lo || mid >= L_hi) break;
      double R_mid = 0.0;
      if (!right_end(mid, R_lo, cap, R_mid)) {
        throw ConvergenceError("balance curve lost during refinement", mid, R_lo);
      }
      std::optional<double> s_mid;
      if (stops(mid, R_mid, cap, s_mid)) {
        L_hi = mid;
        R_hi = R_mid;
        s_hi = *s_mid;
      } else {
        L_lo = mid;
        R_lo = R_mid;
      }
    }
    return {true, L_hi, s_hi, R_hi};
  }

  std::size_t grid_size() const {
    return m_.all_normal() ? options_.interior_grid
                           : std::max<std::size_t>(16, options_.interior_grid / 4);
  }

  const MixtureModel& m_;
  const PopulationOptions& options_;
  double step_;
  const std::vector<double>& minima_;
};

struct RootScan {
  ScanOutcome outcome;
  double lo = 0.0;
};

RootScan scan_root(const MixtureModel& m, const PopulationOptions& options, double step,
                   const std::vector<double>& minima) {
  const auto [sup_lo, sup_hi] = m.support();
  double q = options.start_quantile;
  for (;;) {
    const double lo = std::isfinite(sup_lo) ? sup_lo : m.quantile(q);
    double hint = std::isfinite(sup_hi) ? sup_hi : m.quantile(1.0 - q);
    if (!std::isfinite(sup_hi)) {
      for (int i = 0; i < 64 && balance_F(m, lo, hint) >= 0.0; ++i) hint += hint - lo;
    }
    const Scanner scanner(m, options, step, minima);
    ScanOutcome out = scanner.run(lo, hint, sup_hi);
    // A stop at the very first L means the start was not extreme enough.
    const bool at_start = out.split && out.L == lo;
    if (at_start && !std::isfinite(sup_lo) && q > 1e-14) {
      q *= 1e-3;
      continue;
    }
    return {out, lo};
  }
}

}  // namespace

std::optional<double> PopulationSplit::d_min() const {
  return std::visit([](const auto& o) { return o.d_min; }, outcome);
}

SplitTriple PopulationSplit::triple() const {
  const Split& s = split();
  return {s.L_star, s.s_star, s.R_star};
}

IntervalMoments interval_moments(const MixtureModel& m, double l, double r) {
  return {m.probability(l, r), m.partial_moment(l, r, 1)};
}

double balance_F(const MixtureModel& m, double L, double R) {
  if (!(L < R)) throw DomainError("balance_F requires L < R");
  const IntervalMoments im = interval_moments(m, L, R);
  if (!(im.mass > 0.0)) throw DomainError("interval (L, R) carries no mass");
  return im.mean() - 0.5 * (L + R);
}

double criterion_G(const MixtureModel& m, double L, double R, double a) {
  if (!(L < R) || a < L || a > R) throw DomainError("criterion_G requires L <= a <= R, L < R");
  if (a == L) return truncated_mean(m, L, R) - L;
  if (a == R) return R - truncated_mean(m, L, R);
  return truncated_mean(m, a, R) - truncated_mean(m, L, a);
}

double normalized_derivative_H(const MixtureModel& m, double L, double R, double a) {
  if (!m.all_normal()) throw UnsupportedKindError("H is available for normal mixtures only");
  if (!(L < a && a < R)) throw DomainError("normalized_derivative_H requires L < a < R");
  // Same value as mu P_{L,a}^2 + (P_{a,R} - P_{L,a}) X_{L,a} - a P_{L,a} P_{a,R},
  // rearranged as P_{L,a} P_{a,R} [P_{L,a}(mu_{a,R} - a) + P_{a,R}(mu_{L,a} - a)] / P_{L,R}
  // so that it keeps its sign where P_{a,R} or P_{L,a} underflows the other terms.
  const IntervalMoments left = interval_moments(m, L, a);
  const IntervalMoments right = interval_moments(m, a, R);
  if (!(left.mass > 0.0) || !(right.mass > 0.0)) {
    throw DomainError("normalized_derivative_H: sub-interval carries no mass");
  }
  const double bracket = left.mass * (right.mean() - a) + right.mass * (left.mean() - a);
  return left.mass * right.mass * bracket / (left.mass + right.mass);
}

double solve_R_given_L(const MixtureModel& m, double L, double R_hint, double scan_step,
                       double tolerance) {
  if (!(R_hint > L)) throw DomainError("solve_R_given_L requires R_hint > L");
  const double step = scan_step > 0.0 ? scan_step : (R_hint - L) * 1e-3;
  const auto F = [&](double R) { return balance_F(m, L, R); };
  double R = R_hint;
  double f = F(R);
  if (f == 0.0) return R;
  // F(L, R) vanishes as R approaches L, so the cell touching L only holds
  // rounding noise.
  while (R - step > L + 0.5 * step) {
    const double lower = R - step;
    const double g = F(lower);
    if (g == 0.0) return lower;
    if ((g > 0.0) != (f > 0.0)) {
      const bool positive_low = g > 0.0;
      return bisect([&](double x) { return (F(x) > 0.0) == positive_low; }, lower, R, tolerance);
    }
    R = lower;
    f = g;
  }
  throw NoBalanceError("no root of F(L, .) in (L, R_hint]", L, R_hint);
}

std::optional<double> interior_maximizer(const MixtureModel& m, double L, double R,
                                         std::size_t grid, double tolerance) {
  if (!(L < R)) throw DomainError("interior_maximizer requires L < R");
  grid = std::max<std::size_t>(grid, 4);
  const double h = (R - L) / static_cast<double>(grid);
  std::optional<double> best;
  double best_value = -kInf;
  const auto consider = [&](double s) {
    const double v = criterion_G(m, L, R, s);
    if (v > best_value) {
      best_value = v;
      best = s;
    }
  };

  if (m.all_normal()) {
    const auto H = [&](double a) { return normalized_derivative_H(m, L, R, a); };
    double prev_a = L + h;
    double prev = H(prev_a);
    for (std::size_t i = 2; i < grid; ++i) {
      const double a = L + h * static_cast<double>(i);
      const double cur = H(a);
      if (prev > 0.0 && cur <= 0.0) {
        consider(bisect([&](double x) { return H(x) > 0.0; }, prev_a, a, tolerance));
      }
      prev_a = a;
      prev = cur;
    }
    return best;
  }

  std::vector<double> g(grid + 1);
  for (std::size_t i = 1; i < grid; ++i) {
    g[i] = criterion_G(m, L, R, L + h * static_cast<double>(i));
  }
  for (std::size_t i = 2; i + 1 < grid; ++i) {
    if (g[i] > g[i - 1] && g[i] >= g[i + 1]) {
      const auto [x, neg] = boost::math::tools::brent_find_minima(
          [&](double a) { return -criterion_G(m, L, R, a); }, L + h * static_cast<double>(i - 1),
          L + h * static_cast<double>(i + 1), 40);
      (void)neg;
      consider(x);
    }
  }
  return best;
}

PopulationSplit find_population_split(const MixtureModel& m, const PopulationOptions& options) {
  const double step = options.grid_step.value_or(default_step(m));
  if (!(step > 0.0)) throw DomainError("grid_step must be positive");
  const std::vector<double> minima = interior_minima(m);

  PopulationSplit result;
  if (minima.empty()) {
    result.outcome = NoSplit{};
    return result;
  }
  const RootScan root = scan_root(m, options, step, minima);
  if (!root.outcome.split) {
    result.outcome = NoSplit{minima.front()};
    return result;
  }
  const ScanOutcome& o = root.outcome;
  result.outcome = Split{o.L, o.s, o.R, minimum_inside(minima, o.L, o.R, o.s)};
  if (options.check_second_split) {
    const Scanner scanner(m, options, step, minima);
    result.second_split_found =
        scanner.run(o.L, o.s, o.s).split || scanner.run(o.s, o.R, o.R).split;
  }
  return result;
}

std::vector<SplitTriple> find_population_splits(const MixtureModel& m,
                                                const PopulationOptions& options) {
  const double step = options.grid_step.value_or(default_step(m));
  if (!(step > 0.0)) throw DomainError("grid_step must be positive");
  const std::vector<double> minima = interior_minima(m);
  std::vector<SplitTriple> out;
  if (minima.empty()) return out;

  const ScanOutcome root = scan_root(m, options, step, minima).outcome;
  if (!root.split) return out;
  const Scanner scanner(m, options, step, minima);
  std::vector<std::pair<ScanOutcome, int>> pending{{root, 0}};
  while (!pending.empty()) {
    const auto [o, depth] = pending.back();
    pending.pop_back();
    out.push_back({o.L, o.s, o.R});
    if (depth >= 16) continue;
    for (const auto& [lo, hi] : {std::pair{o.L, o.s}, std::pair{o.s, o.R}}) {
      const ScanOutcome sub = scanner.run(lo, hi, hi);
      if (sub.split) pending.push_back({sub, depth + 1});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SplitTriple& a, const SplitTriple& b) { return a.split < b.split; });
  return out;
}

double split_size(const MixtureModel& m, double L, double s, double R) {
  if (!(L < s && s < R)) throw DomainError("split_size requires L < s < R");
  return std::min(m.probability(L, s), m.probability(s, R));
}

McReport misclassification_analysis(const MixtureModel& m, const PopulationSplit& split) {
  if (m.size() != 2) {
    throw UnsupportedKindError("misclassification analysis needs exactly two components");
  }
  std::size_t i1 = 0;
  std::size_t i2 = 1;
  if (m.components()[0].quantile(0.5) > m.components()[1].quantile(0.5)) std::swap(i1, i2);
  const Component& c1 = m.components()[i1];
  const Component& c2 = m.components()[i2];
  const double w1 = m.weights()[i1];
  const double w2 = m.weights()[i2];

  const auto g = [&](double s) { return w1 * c1.pdf(s) - w2 * c2.pdf(s); };
  const double lo = c1.quantile(0.5);
  const double hi = c2.quantile(0.5);
  if (!(g(lo) > 0.0 && g(hi) < 0.0)) {
    throw ConvergenceError("no weighted density crossing between the component centers", lo, hi);
  }
  McReport r;
  r.s_mc = bisect([&](double x) { return g(x) > 0.0; }, lo, hi, 1e-12);
  const auto mce = [&](double s) { return w1 * c1.ccdf(s) + w2 * c2.cdf(s); };
  r.mce_oracle = mce(r.s_mc);
  r.mce_procedure = split.has_split() ? mce(split.split().s_star) : std::min(w1, w2);
  r.excess = r.mce_procedure - r.mce_oracle;
  return r;
}

Table1Row table1_row(const MixtureModel& m, const PopulationOptions& options) {
  if (m.size() != 2) throw UnsupportedKindError("table rows need exactly two components");
  const PopulationSplit split = find_population_split(m, options);
  const McReport mc = misclassification_analysis(m, split);
  Table1Row row;
  std::size_t i1 = 0;
  std::size_t i2 = 1;
  if (m.components()[0].quantile(0.5) > m.components()[1].quantile(0.5)) std::swap(i1, i2);
  row.p1 = m.weights()[i1];
  row.p2 = m.weights()[i2];
  row.mu1 = m.components()[i1].quantile(0.5);
  row.mu2 = m.components()[i2].quantile(0.5);
  row.d_min = split.d_min();
  if (split.has_split()) {
    row.s_star = split.split().s_star;
    row.L_star = split.split().L_star;
    row.R_star = split.split().R_star;
    row.second_split = split.second_split_found;
  }
  row.s_mc = mc.s_mc;
  row.excess_mce = mc.excess;
  return row;
}

Table1Row table1_row(double p1, double mu1, double mu2, const PopulationOptions& options) {
  if (!(p1 > 0.0 && p1 < 1.0)) throw DomainError("p1 must lie in (0, 1)");
  if (!(mu1 < mu2)) throw DomainError("table rows require mu1 < mu2");
  const MixtureModel m({Component(Normal{mu1, 1.0}), Component(Normal{mu2, 1.0})},
                       {p1, 1.0 - p1});
  return table1_row(m, options);
}

std::vector<Table1Row> table1_grid(const PopulationOptions& options) {
  std::vector<Table1Row> rows;
  for (int sep = 9; sep >= 3; --sep) {
    for (int k = 10; k >= 2; --k) {
      const double p1 = 0.05 * k;
      rows.push_back(table1_row(p1, -0.5 * sep, 0.5 * sep, options));
    }
  }
  return rows;
}

}  // namespace fusionclust
