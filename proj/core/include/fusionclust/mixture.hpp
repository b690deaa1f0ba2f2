#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fusionclust {

struct Normal {
  double mean = 0.0;
  double sd = 1.0;
};
/// Standard Student-t with `df` degrees of freedom shifted to `location`.
struct StudentT {
  double df = 1.0;
  double location = 0.0;
};
/// Double exponential with density rate/2 * exp(-rate |x - location|).
struct Laplace {
  double location = 0.0;
  double rate = 1.0;
};
struct Beta {
  double a = 1.0;
  double b = 1.0;
};
struct ChiSquare {
  double df = 1.0;
};

/// One univariate mixture component.
class Component {
 public:
  using Kind = std::variant<Normal, StudentT, Laplace, Beta, ChiSquare>;

  /// Throws DomainError when a parameter violates its constraint.
  explicit Component(Kind kind);

  const Kind& kind() const noexcept { return kind_; }
  bool is_normal() const noexcept { return std::holds_alternative<Normal>(kind_); }

  double pdf(double x) const;
  double cdf(double x) const;
  /// Upper tail 1 - cdf(x), accurate in the right tail.
  double ccdf(double x) const;
  /// P(l < X < r), evaluated on the tail that avoids cancellation.
  double probability(double l, double r) const;
  double quantile(double p) const;
  /// Closed support (lower, upper); infinite ends for unbounded kinds.
  std::pair<double, double> support() const;

  /// Integral of x^order * pdf(x) over (l, r) for order in {0, 1, 2}.
  /// Throws DomainError when the moment diverges on an unbounded range.
  double partial_moment(double l, double r, int order) const;

  template <typename Engine>
  double draw(Engine& engine) const;

  /// Grammar form, e.g. "normal(-4,1)".
  std::string describe() const;

 private:
  Kind kind_;
};

/// A weighted finite mixture of univariate components.
class MixtureModel {
 public:
  /// Throws DomainError unless components are non-empty and weights are
  /// positive and sum to 1 within 1e-12.
  MixtureModel(std::vector<Component> components, std::vector<double> weights);

  /// Rescales positive `weights` to sum to one.
  static MixtureModel normalized(std::vector<Component> components, std::vector<double> weights);

  const std::vector<Component>& components() const noexcept { return components_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return components_.size(); }

  bool all_normal() const noexcept;
  std::pair<double, double> support() const;

  double density(double x) const;
  double cdf(double x) const;
  /// Mixture mass of (l, r).
  double probability(double l, double r) const;
  /// Integral of x^order f(x) over (l, r).
  double partial_moment(double l, double r, int order) const;
  double quantile(double p) const;

  std::string describe() const;

 private:
  std::vector<Component> components_;
  std::vector<double> weights_;
};

double density(const MixtureModel& m, double x);
double cdf(const MixtureModel& m, double x);

/// Conditional mean on (l, r). Normal mixtures use the closed form
///   int x phi(x - mu) dx = mu Phi(x - mu) - phi(x - mu);
/// other kinds use closed-form shift identities (beta, chi-square) or
/// adaptive Gauss-Kronrod quadrature (Student-t, Laplace). l == r returns r.
/// Throws DomainError when l > r or the interval carries no mass.
double truncated_mean(const MixtureModel& m, double l, double r);

/// n draws, fully determined by (m, n, seed).
std::vector<double> sample(const MixtureModel& m, std::size_t n, std::uint64_t seed);

enum class ExtremumType { mode, minimum };

struct Extremum {
  double location = 0.0;
  ExtremumType type = ExtremumType::mode;
};

struct ExtremaOptions {
  std::size_t grid_points = 4096;
  double lower_quantile = 0.0005;
  double upper_quantile = 0.9995;
  double tolerance = 1e-8;
};

/// Interior stationary points of the density, ascending, located by sign
/// changes of a finite-difference derivative and refined by bisection.
std::vector<Extremum> find_local_extrema(const MixtureModel& m, const ExtremaOptions& options = {});

/// Locations of interior minima only.
std::vector<double> interior_minima(const MixtureModel& m, const ExtremaOptions& options = {});

// ---------------------------------------------------------------------------

template <typename Engine>
double Component::draw(Engine& engine) const {
  return std::visit(
      [&engine](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return std::normal_distribution<double>(d.mean, d.sd)(engine);
        } else if constexpr (std::is_same_v<T, StudentT>) {
          return d.location + std::student_t_distribution<double>(d.df)(engine);
        } else if constexpr (std::is_same_v<T, Laplace>) {
          const double e = std::exponential_distribution<double>(d.rate)(engine);
          return std::bernoulli_distribution(0.5)(engine) ? d.location + e : d.location - e;
        } else if constexpr (std::is_same_v<T, Beta>) {
          const double x = std::gamma_distribution<double>(d.a, 1.0)(engine);
          const double y = std::gamma_distribution<double>(d.b, 1.0)(engine);
          return x / (x + y);
        } else {
          return std::chi_squared_distribution<double>(d.df)(engine);
        }
      },
      kind_);
}

}  // namespace fusionclust
