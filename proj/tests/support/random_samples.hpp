#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "fusionclust/mixture.hpp"

namespace fusionclust::test_support {

/// Continuous draws from one of several generators picked by `family`:
/// uniform, normal, two-normal mixture, exponential, Cauchy, lognormal.
inline std::vector<double> random_continuous_sample(std::mt19937_64& rng, std::size_t n,
                                                    int family) {
  std::vector<double> out(n);
  switch (family % 6) {
    case 0: {
      std::uniform_real_distribution<double> d(-5.0, 5.0);
      for (double& x : out) x = d(rng);
      break;
    }
    case 1: {
      std::normal_distribution<double> d(0.0, 1.0);
      for (double& x : out) x = d(rng);
      break;
    }
    case 2: {
      std::normal_distribution<double> d(0.0, 1.0);
      std::bernoulli_distribution side(0.4);
      for (double& x : out) x = d(rng) + (side(rng) ? -3.0 : 3.0);
      break;
    }
    case 3: {
      std::exponential_distribution<double> d(1.5);
      for (double& x : out) x = d(rng);
      break;
    }
    case 4: {
      std::cauchy_distribution<double> d(0.0, 1.0);
      for (double& x : out) x = d(rng);
      break;
    }
    default: {
      std::lognormal_distribution<double> d(0.0, 0.8);
      for (double& x : out) x = d(rng);
      break;
    }
  }
  return out;
}

/// Random normal mixture with 1..4 components on [-6, 6].
inline MixtureModel random_normal_mixture(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> mean(-6.0, 6.0);
  std::uniform_real_distribution<double> sd(0.3, 2.5);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  const int k = count(rng);
  std::vector<Component> comps;
  std::vector<double> weights;
  for (int i = 0; i < k; ++i) {
    comps.emplace_back(Normal{mean(rng), sd(rng)});
    weights.push_back(weight(rng));
  }
  return MixtureModel::normalized(std::move(comps), std::move(weights));
}

inline MixtureModel two_normal(double p1, double mu1, double mu2) {
  return MixtureModel({Component(Normal{mu1, 1.0}), Component(Normal{mu2, 1.0})}, {p1, 1.0 - p1});
}

}  // namespace fusionclust::test_support
