#include "fusionclust/mixture.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/laplace.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/roots.hpp>

#include "fusionclust/errors.hpp"
#include "fusionclust/quadrature.hpp"

namespace fusionclust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double std_phi(double z) { return std::isinf(z) ? 0.0 : kInvSqrt2Pi * std::exp(-0.5 * z * z); }
double std_Phi(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }
double std_Q(double z) { return 0.5 * std::erfc(z * kInvSqrt2); }
// z * phi(z) with the limit 0 at +-infinity.
double z_phi(double z) { return std::isinf(z) ? 0.0 : z * std_phi(z); }

double std_mass(double a, double b) {
  if (a >= 0.0) return std_Q(a) - std_Q(b);
  if (b <= 0.0) return std_Phi(b) - std_Phi(a);
  return 1.0 - std_Phi(a) - std_Q(b);
}

std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// Mass of (l, r) from a boost distribution, using the complement in the
// upper half to keep tail differences accurate.
template <class Dist>
double boost_mass(const Dist& d, double l, double r, double pivot) {
  using boost::math::cdf;
  using boost::math::complement;
  if (l >= pivot) {
    const double ql = std::isinf(l) ? 1.0 : cdf(complement(d, l));
    const double qr = std::isinf(r) ? 0.0 : cdf(complement(d, r));
    return ql - qr;
  }
  const double pl = std::isinf(l) ? 0.0 : cdf(d, l);
  const double pr = std::isinf(r) ? 1.0 : cdf(d, r);
  return pr - pl;
}

}  // namespace

// ----------------------------------------------------------------- Component

Component::Component(Kind kind) : kind_(kind) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  std::visit(overloaded{
                 [&](const Normal& d) {
                   if (!std::isfinite(d.mean) || !positive(d.sd))
                     throw DomainError("normal: need finite mean and sd > 0");
                 },
                 [&](const StudentT& d) {
                   if (!positive(d.df) || !std::isfinite(d.location))
                     throw DomainError("student_t: need df > 0 and finite location");
                 },
                 [&](const Laplace& d) {
                   if (!std::isfinite(d.location) || !positive(d.rate))
                     throw DomainError("laplace: need finite location and rate > 0");
                 },
                 [&](const Beta& d) {
                   if (!positive(d.a) || !positive(d.b))
                     throw DomainError("beta: need a > 0 and b > 0");
                 },
                 [&](const ChiSquare& d) {
                   if (!positive(d.df)) throw DomainError("chi_square: need df > 0");
                 },
             },
             kind_);
}

std::pair<double, double> Component::support() const {
  return std::visit(overloaded{
                        [](const Beta&) { return std::pair{0.0, 1.0}; },
                        [](const ChiSquare&) { return std::pair{0.0, kInf}; },
                        [](const auto&) { return std::pair{-kInf, kInf}; },
                    },
                    kind_);
}

double Component::pdf(double x) const {
  const auto [lo, hi] = support();
  if (x <= lo || x >= hi) return 0.0;
  return std::visit(overloaded{
                        [x](const Normal& d) { return std_phi((x - d.mean) / d.sd) / d.sd; },
                        [x](const StudentT& d) {
                          return boost::math::pdf(boost::math::students_t(d.df), x - d.location);
                        },
                        [x](const Laplace& d) {
                          return 0.5 * d.rate * std::exp(-d.rate * std::abs(x - d.location));
                        },
                        [x](const Beta& d) {
                          return boost::math::pdf(boost::math::beta_distribution<>(d.a, d.b), x);
                        },
                        [x](const ChiSquare& d) {
                          return boost::math::pdf(boost::math::chi_squared(d.df), x);
                        },
                    },
                    kind_);
}

double Component::cdf(double x) const {
  const auto [lo, hi] = support();
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  return std::visit(overloaded{
                        [x](const Normal& d) { return std_Phi((x - d.mean) / d.sd); },
                        [x](const StudentT& d) {
                          return boost::math::cdf(boost::math::students_t(d.df), x - d.location);
                        },
                        [x](const Laplace& d) {
                          const double z = x - d.location;
                          return z < 0 ? 0.5 * std::exp(d.rate * z) : 1.0 - 0.5 * std::exp(-d.rate * z);
                        },
                        [x](const Beta& d) {
                          return boost::math::cdf(boost::math::beta_distribution<>(d.a, d.b), x);
                        },
                        [x](const ChiSquare& d) {
                          return boost::math::cdf(boost::math::chi_squared(d.df), x);
                        },
                    },
                    kind_);
}

double Component::ccdf(double x) const {
  const auto [lo, hi] = support();
  if (x <= lo) return 1.0;
  if (x >= hi) return 0.0;
  using boost::math::complement;
  return std::visit(overloaded{
                        [x](const Normal& d) { return std_Q((x - d.mean) / d.sd); },
                        [x](const StudentT& d) {
                          return boost::math::cdf(
                              complement(boost::math::students_t(d.df), x - d.location));
                        },
                        [x](const Laplace& d) {
                          const double z = x - d.location;
                          return z < 0 ? 1.0 - 0.5 * std::exp(d.rate * z) : 0.5 * std::exp(-d.rate * z);
                        },
                        [x](const Beta& d) {
                          return boost::math::cdf(
                              complement(boost::math::beta_distribution<>(d.a, d.b), x));
                        },
                        [x](const ChiSquare& d) {
                          return boost::math::cdf(complement(boost::math::chi_squared(d.df), x));
                        },
                    },
                    kind_);
}

double Component::probability(double l, double r) const {
  if (!(l < r)) return 0.0;
  const auto [lo, hi] = support();
  l = std::max(l, lo);
  r = std::min(r, hi);
  if (!(l < r)) return 0.0;
  return std::visit(
      overloaded{
          [&](const Normal& d) { return std_mass((l - d.mean) / d.sd, (r - d.mean) / d.sd); },
          [&](const StudentT& d) {
            return boost_mass(boost::math::students_t(d.df), l - d.location, r - d.location, 0.0);
          },
          [&](const Laplace& d) {
            return boost_mass(boost::math::laplace_distribution<>(d.location, 1.0 / d.rate), l, r,
                              d.location);
          },
          [&](const Beta& d) {
            const boost::math::beta_distribution<> dist(d.a, d.b);
            return boost_mass(dist, l, r, d.a / (d.a + d.b));
          },
          [&](const ChiSquare& d) {
            const boost::math::chi_squared dist(d.df);
            return boost_mass(dist, l, r, d.df);
          },
      },
      kind_);
}

double Component::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return support().first;
    if (p == 1.0) return support().second;
    throw DomainError("quantile probability must lie in [0, 1]");
  }
  return std::visit(overloaded{
                        [p](const Normal& d) {
                          return d.mean + d.sd * boost::math::quantile(
                                                     boost::math::normal_distribution<>(), p);
                        },
                        [p](const StudentT& d) {
                          return d.location +
                                 boost::math::quantile(boost::math::students_t(d.df), p);
                        },
                        [p](const Laplace& d) {
                          return p < 0.5 ? d.location + std::log(2.0 * p) / d.rate
                                         : d.location - std::log(2.0 * (1.0 - p)) / d.rate;
                        },
                        [this, p](const Beta& d) {
                          try {
                            return boost::math::quantile(
                                boost::math::beta_distribution<>(d.a, d.b), p);
                          } catch (const boost::math::evaluation_error&) {
                            // Boost's inverse can stall on symmetric shapes; the cdf
                            // is monotone on [0, 1], so bracket it directly.
                            std::uintmax_t iterations = 200;
                            const auto [a, b] = boost::math::tools::toms748_solve(
                                [&](double x) { return cdf(x) - p; }, 0.0, 1.0,
                                boost::math::tools::eps_tolerance<double>(50), iterations);
                            return 0.5 * (a + b);
                          }
                        },
                        [p](const ChiSquare& d) {
                          return boost::math::quantile(boost::math::chi_squared(d.df), p);
                        },
                    },
                    kind_);
}

double Component::partial_moment(double l, double r, int order) const {
  if (order < 0 || order > 2) throw DomainError("partial_moment: order must be 0, 1 or 2");
  if (!(l < r)) return 0.0;
  const auto [lo, hi] = support();
  l = std::max(l, lo);
  r = std::min(r, hi);
  if (!(l < r)) return 0.0;
  if (order == 0) return probability(l, r);

  return std::visit(
      overloaded{
          [&](const Normal& d) {
            const double a = (l - d.mean) / d.sd;
            const double b = (r - d.mean) / d.sd;
            const double mass = std_mass(a, b);
            const double dphi = std_phi(a) - std_phi(b);
            if (order == 1) return d.mean * mass + d.sd * dphi;
            return d.mean * d.mean * mass + 2.0 * d.mean * d.sd * dphi +
                   d.sd * d.sd * (mass + z_phi(a) - z_phi(b));
          },
          [&](const Beta& d) {
            // x f_{a,b}(x) = a/(a+b) f_{a+1,b}(x)
            double factor = 1.0;
            for (int k = 0; k < order; ++k) factor *= (d.a + k) / (d.a + d.b + k);
            return factor * Component(Beta{d.a + order, d.b}).probability(l, r);
          },
          [&](const ChiSquare& d) {
            // x f_k(x) = k f_{k+2}(x)
            double factor = 1.0;
            for (int k = 0; k < order; ++k) factor *= d.df + 2.0 * k;
            return factor * Component(ChiSquare{d.df + 2.0 * order}).probability(l, r);
          },
          [&](const StudentT& d) {
            if ((std::isinf(l) || std::isinf(r)) && d.df <= order) {
              throw DomainError("student_t moment diverges on an unbounded interval");
            }
            const double loc = d.location;
            const double kink[] = {loc};
            return integrate([&](double x) { return std::pow(x, order) * pdf(x); }, l, r, 1e-12,
                             kink)
                .value;
          },
          [&](const Laplace& d) {
            const double kink[] = {d.location};
            return integrate([&](double x) { return std::pow(x, order) * pdf(x); }, l, r, 1e-12,
                             kink)
                .value;
          },
      },
      kind_);
}

std::string Component::describe() const {
  return std::visit(
      overloaded{
          [](const Normal& d) {
            return "normal(" + format_number(d.mean) + "," + format_number(d.sd) + ")";
          },
          [](const StudentT& d) {
            return "student_t(" + format_number(d.df) + "," + format_number(d.location) + ")";
          },
          [](const Laplace& d) {
            return "laplace(" + format_number(d.location) + "," + format_number(d.rate) + ")";
          },
          [](const Beta& d) {
            return "beta(" + format_number(d.a) + "," + format_number(d.b) + ")";
          },
          [](const ChiSquare& d) { return "chi_square(" + format_number(d.df) + ")"; },
      },
      kind_);
}

// -------------------------------------------------------------- MixtureModel

MixtureModel::MixtureModel(std::vector<Component> components, std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
  if (components_.empty()) throw DomainError("mixture needs at least one component");
  if (components_.size() != weights_.size()) {
    throw DomainError("mixture needs one weight per component");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(std::isfinite(w) && w > 0.0)) throw DomainError("mixture weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("mixture weights must sum to 1, got " + format_number(total));
  }
}

MixtureModel MixtureModel::normalized(std::vector<Component> components,
                                      std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw DomainError("mixture weights must be positive");
  for (double& w : weights) w /= total;
  return MixtureModel(std::move(components), std::move(weights));
}

bool MixtureModel::all_normal() const noexcept {
  return std::all_of(components_.begin(), components_.end(),
                     [](const Component& c) { return c.is_normal(); });
}

std::pair<double, double> MixtureModel::support() const {
  double lo = kInf;
  double hi = -kInf;
  for (const Component& c : components_) {
    const auto [l, h] = c.support();
    lo = std::min(lo, l);
    hi = std::max(hi, h);
  }
  return {lo, hi};
}

double MixtureModel::density(double x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) total += weights_[i] * components_[i].pdf(x);
  return total;
}

double MixtureModel::cdf(double x) const {
  if (x == -kInf) return 0.0;
  if (x == kInf) return 1.0;
  double total = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) total += weights_[i] * components_[i].cdf(x);
  return std::clamp(total, 0.0, 1.0);
}

double MixtureModel::probability(double l, double r) const {
  double total = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    total += weights_[i] * components_[i].probability(l, r);
  }
  return total;
}

double MixtureModel::partial_moment(double l, double r, int order) const {
  double total = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    total += weights_[i] * components_[i].partial_moment(l, r, order);
  }
  return total;
}

double MixtureModel::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile probability must lie in [0, 1]");
  if (p == 0.0) return support().first;
  if (p == 1.0) return support().second;
  double lo = kInf;
  double hi = -kInf;
  for (const Component& c : components_) {
    const double q = c.quantile(p);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  if (lo == hi) return lo;
  std::uintmax_t iterations = 200;
  auto [a, b] = boost::math::tools::toms748_solve(
      [&](double x) { return cdf(x) - p; }, lo, hi,
      boost::math::tools::eps_tolerance<double>(50), iterations);
  return 0.5 * (a + b);
}

std::string MixtureModel::describe() const {
  std::string out;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i > 0) out += "+";
    out += format_number(weights_[i]) + "*" + components_[i].describe();
  }
  return out;
}

// --------------------------------------------------------------- free API

double density(const MixtureModel& m, double x) { return m.density(x); }

double cdf(const MixtureModel& m, double x) { return m.cdf(x); }

double truncated_mean(const MixtureModel& m, double l, double r) {
  if (l > r) throw DomainError("truncated_mean: need l <= r");
  if (l == r) return r;
  const double mass = m.probability(l, r);
  if (!(mass > 0.0)) throw DomainError("truncated_mean: interval carries no probability");
  return m.partial_moment(l, r, 1) / mass;
}

std::vector<double> sample(const MixtureModel& m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::discrete_distribution<std::size_t> pick(m.weights().begin(), m.weights().end());
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(m.components()[pick(engine)].draw(engine));
  }
  return out;
}

std::vector<Extremum> find_local_extrema(const MixtureModel& m, const ExtremaOptions& options) {
  const double lo = m.quantile(options.lower_quantile);
  const double hi = m.quantile(options.upper_quantile);
  const std::size_t points = std::max<std::size_t>(options.grid_points, 3);
  const double spacing = (hi - lo) / static_cast<double>(points - 1);
  const double h = 1e-3 * spacing;

  auto slope = [&](double x) { return m.density(x + h) - m.density(x - h); };
  auto sign = [](double v) { return (v > 0) - (v < 0); };

  std::vector<Extremum> out;
  double prev_x = lo;
  int prev_sign = sign(slope(lo));
  for (std::size_t i = 1; i < points; ++i) {
    const double x = lo + spacing * static_cast<double>(i);
    const int s = sign(slope(x));
    if (s == 0) continue;
    if (prev_sign != 0 && s != prev_sign) {
      // Bisect the derivative sign change down to the tolerance.
      double a = prev_x;
      double b = x;
      while (b - a > options.tolerance) {
        const double mid = 0.5 * (a + b);
        const int sm = sign(slope(mid));
        if (sm == prev_sign) {
          a = mid;
        } else if (sm == s) {
          b = mid;
        } else {
          a = b = mid;
        }
      }
      out.push_back({0.5 * (a + b), prev_sign > 0 ? ExtremumType::mode : ExtremumType::minimum});
    }
    prev_sign = s;
    prev_x = x;
  }
  return out;
}

std::vector<double> interior_minima(const MixtureModel& m, const ExtremaOptions& options) {
  std::vector<double> out;
  for (const Extremum& e : find_local_extrema(m, options)) {
    if (e.type == ExtremumType::minimum) out.push_back(e.location);
  }
  return out;
}

}  // namespace fusionclust
