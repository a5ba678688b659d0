// Copyright 2026 The ahr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AHR_STATS_H
#define AHR_STATS_H

#include <span>
#include <vector>

namespace ahr::stats {

/// Standard normal CDF.
double normal_cdf(double z);

/// One-sample Kolmogorov-Smirnov statistic against Normal(mean, variance).
double ks_normal(std::span<const double> samples, double mean, double variance);

/// One-sample KS statistic against a tabulated CDF (nodes ascending, cdf
/// values at the nodes, linear in between).
double ks_tabulated(std::span<const double> samples, std::span<const double> nodes, std::span<const double> cdf);

/// Two-sample KS statistic.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic Kolmogorov survival function P(K > lambda).
double kolmogorov_survival(double lambda);

/// Asymptotic critical values: reject when D > c * sqrt(1/n) (one sample) or
/// D > c * sqrt((n+m)/(n m)) (two sample).
inline constexpr double kKsCritical1pct = 1.6276;
inline constexpr double kKsCritical5pct = 1.3581;

double pearson(std::span<const double> a, std::span<const double> b);

struct ChiSquareResult {
    double statistic;
    int dof;
    double p_value;
};

/// Pearson chi-square independence test on a bins x bins contingency table
/// whose edges are the empirical marginal quantiles (equiprobable bins).
ChiSquareResult chi_square_independence(std::span<const double> a, std::span<const double> b, int bins);

/// Upper tail of the chi-square distribution.
double chi_square_survival(double statistic, int dof);

struct Interval {
    double low;
    double high;
};

/// 95% Wilson score interval for k successes out of n.
Interval wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

struct Moments {
    double mean;
    double variance;  // unbiased
};

Moments moments(std::span<const double> values);

}  // namespace ahr::stats

#endif
