#pragma once

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "desdd/ensembles.hpp"

namespace desdd::testing {

/// Chi-square goodness-of-fit p-value of poissonSample against the Poisson pmf.
/// Adjacent bins are pooled until each expects at least 5; the rest forms the upper tail.
inline double poissonGofPValue(double lambda, std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> observed;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto k = poissonSample(lambda, rng);
    if (k >= observed.size()) observed.resize(k + 1, 0.0);
    observed[k] += 1.0;
  }
  const double n = static_cast<double>(samples);
  auto expectedAt = [&](std::size_t k) {
    const double kd = static_cast<double>(k);
    return n * std::exp(-lambda + kd * std::log(lambda) - std::lgamma(kd + 1.0));
  };
  std::vector<double> obsBins, expBins;
  double obsAcc = 0.0, expAcc = 0.0, obsUsed = 0.0, expUsed = 0.0;
  for (std::size_t k = 0;; ++k) {
    obsAcc += k < observed.size() ? observed[k] : 0.0;
    expAcc += expectedAt(k);
    const double tail = n - expUsed - expAcc;
    if (tail < 5.0) break;
    if (expAcc >= 5.0) {
      obsBins.push_back(obsAcc);
      expBins.push_back(expAcc);
      obsUsed += obsAcc;
      expUsed += expAcc;
      obsAcc = expAcc = 0.0;
    }
  }
  obsBins.push_back(n - obsUsed);
  expBins.push_back(n - expUsed);
  double stat = 0.0;
  for (std::size_t b = 0; b < obsBins.size(); ++b)
    stat += (obsBins[b] - expBins[b]) * (obsBins[b] - expBins[b]) / expBins[b];
  const boost::math::chi_squared dist(static_cast<double>(obsBins.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace desdd::testing
