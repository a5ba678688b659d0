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

#include "ahr/stats.h"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ahr::stats {

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

namespace {

template <typename Cdf>
double ks_against(std::span<const double> samples, Cdf cdf) {
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    double n = static_cast<double>(s.size());
    double d = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double f = cdf(s[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

}  // namespace

double ks_normal(std::span<const double> samples, double mean, double variance) {
    double sd = std::sqrt(variance);
    return ks_against(samples, [&](double x) { return normal_cdf((x - mean) / sd); });
}

double ks_tabulated(std::span<const double> samples, std::span<const double> nodes, std::span<const double> cdf) {
    return ks_against(samples, [&](double x) {
        if (x <= nodes.front()) {
            return cdf.front();
        }
        if (x >= nodes.back()) {
            return cdf.back();
        }
        auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
        std::size_t i = static_cast<std::size_t>(it - nodes.begin()) - 1;
        double t = (x - nodes[i]) / (nodes[i + 1] - nodes[i]);
        return cdf[i] + t * (cdf[i + 1] - cdf[i]);
    });
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < x.size() && j < y.size()) {
        double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

double kolmogorov_survival(double lambda) {
    if (lambda < 0.2) {
        return 1.0;
    }
    double s = 0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-17) {
            break;
        }
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw std::invalid_argument("pearson: need two equal-length samples of size >= 2");
    }
    auto ma = moments(a), mb = moments(b);
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += (a[i] - ma.mean) * (b[i] - mb.mean);
    }
    s /= static_cast<double>(a.size() - 1);
    return s / std::sqrt(ma.variance * mb.variance);
}

double chi_square_survival(double statistic, int dof) {
    return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

ChiSquareResult chi_square_independence(std::span<const double> a, std::span<const double> b, int bins) {
    if (a.size() != b.size() || a.size() < static_cast<std::size_t>(bins * bins)) {
        throw std::invalid_argument("chi_square_independence: sample too small for the table");
    }
    auto edges = [bins](std::span<const double> v) {
        std::vector<double> s(v.begin(), v.end());
        std::sort(s.begin(), s.end());
        std::vector<double> e(bins - 1);
        for (int k = 1; k < bins; ++k) {
            e[k - 1] = s[s.size() * k / bins];
        }
        return e;
    };
    auto ea = edges(a), eb = edges(b);
    auto bin_of = [](const std::vector<double> &e, double x) {
        return static_cast<int>(std::upper_bound(e.begin(), e.end(), x) - e.begin());
    };
    std::vector<double> table(static_cast<std::size_t>(bins) * bins, 0.0), row(bins, 0.0), col(bins, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        int r = bin_of(ea, a[i]), c = bin_of(eb, b[i]);
        table[static_cast<std::size_t>(r) * bins + c] += 1;
        row[r] += 1;
        col[c] += 1;
    }
    double n = static_cast<double>(a.size());
    double chi2 = 0;
    for (int r = 0; r < bins; ++r) {
        for (int c = 0; c < bins; ++c) {
            double expect = row[r] * col[c] / n;
            if (expect > 0) {
                double diff = table[static_cast<std::size_t>(r) * bins + c] - expect;
                chi2 += diff * diff / expect;
            }
        }
    }
    int dof = (bins - 1) * (bins - 1);
    return {chi2, dof, chi_square_survival(chi2, dof)};
}

Interval wilson_interval(std::size_t k, std::size_t n, double z) {
    double nn = static_cast<double>(n);
    double p = k / nn;
    double z2 = z * z;
    double denom = 1.0 + z2 / nn;
    double centre = (p + z2 / (2 * nn)) / denom;
    double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
    double lo = k == 0 ? 0.0 : std::max(0.0, centre - half);
    double hi = k == n ? 1.0 : std::min(1.0, centre + half);
    return {lo, hi};
}

Moments moments(std::span<const double> values) {
    double n = static_cast<double>(values.size());
    double mean = 0;
    for (double v : values) {
        mean += v;
    }
    mean /= n;
    double ss = 0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return {mean, values.size() > 1 ? ss / (n - 1) : 0.0};
}

}  // namespace ahr::stats
