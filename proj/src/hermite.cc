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

#include "ahr/hermite.h"

#include <cmath>
#include <numbers>

namespace ahr {

void hermite_functions(double x, std::span<double> out) {
    if (out.empty()) {
        return;
    }
    // pi^{-1/4}
    constexpr double kNorm = 0.75112554446494248286;
    out[0] = kNorm * std::exp(-0.5 * x * x);
    if (out.size() > 1) {
        out[1] = std::numbers::sqrt2 * x * out[0];
    }
    for (std::size_t n = 2; n < out.size(); ++n) {
        double dn = static_cast<double>(n);
        out[n] = std::sqrt(2.0 / dn) * x * out[n - 1] - std::sqrt((dn - 1.0) / dn) * out[n - 2];
    }
}

std::vector<double> hermite_functions(double x, int count) {
    std::vector<double> out(count);
    hermite_functions(x, out);
    return out;
}

namespace {

// Lower cumulative for x <= 0, where every entry is at most O(1/2) and the
// recurrence does not subtract nearly equal numbers.
std::vector<double> lower_cumulative_left(double x, int dim) {
    int ext = dim + 1;  // indices 0..dim are needed by the diagonal recurrence
    std::vector<double> chi(ext + 1);
    hermite_functions(x, chi);
    std::vector<double> dchi(ext);
    for (int n = 0; n < ext; ++n) {
        double lower = n > 0 ? std::sqrt(0.5 * n) * chi[n - 1] : 0.0;
        dchi[n] = lower - std::sqrt(0.5 * (n + 1)) * chi[n + 1];
    }
    std::vector<double> full(static_cast<std::size_t>(ext) * ext);
    auto at = [&](int m, int n) -> double & { return full[static_cast<std::size_t>(m) * ext + n]; };
    for (int m = 0; m < ext; ++m) {
        for (int n = m + 1; n < ext; ++n) {
            double v = (dchi[m] * chi[n] - chi[m] * dchi[n]) / (2.0 * (n - m));
            at(m, n) = v;
            at(n, m) = v;
        }
    }
    at(0, 0) = 0.5 * std::erfc(-x);
    for (int n = 1; n < dim; ++n) {
        double s = -chi[n] * chi[n - 1] - std::sqrt(0.5 * (n + 1)) * at(n + 1, n - 1);
        if (n >= 2) {
            s += std::sqrt(0.5 * (n - 1)) * at(n, n - 2);
        }
        at(n, n) = at(n - 1, n - 1) + s / std::sqrt(0.5 * n);
    }
    std::vector<double> out(static_cast<std::size_t>(dim) * dim);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            out[static_cast<std::size_t>(m) * dim + n] = at(m, n);
        }
    }
    return out;
}

// chi_m(-x) chi_n(-x) = (-1)^{m+n} chi_m(x) chi_n(x)
void reflect(std::vector<double> &mat, int dim) {
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            if ((m + n) & 1) {
                mat[static_cast<std::size_t>(m) * dim + n] = -mat[static_cast<std::size_t>(m) * dim + n];
            }
        }
    }
}

void complement(std::vector<double> &mat, int dim) {
    for (auto &v : mat) {
        v = -v;
    }
    for (int n = 0; n < dim; ++n) {
        mat[static_cast<std::size_t>(n) * dim + n] += 1.0;
    }
}

}  // namespace

std::vector<double> hermite_cumulative(double x, int dim) {
    if (x <= 0) {
        return lower_cumulative_left(x, dim);
    }
    auto mat = lower_cumulative_left(-x, dim);
    reflect(mat, dim);
    complement(mat, dim);
    return mat;
}

std::vector<double> hermite_upper_cumulative(double x, int dim) {
    if (x >= 0) {
        auto mat = lower_cumulative_left(-x, dim);
        reflect(mat, dim);
        return mat;
    }
    auto mat = lower_cumulative_left(x, dim);
    complement(mat, dim);
    return mat;
}

HermiteTable::HermiteTable(const QuadratureGrid &grid, int dim)
    : grid_(grid), dim_(dim), values_(static_cast<std::size_t>(grid.points()) * dim) {
    for (int i = 0; i < grid.points(); ++i) {
        hermite_functions(grid.node(i), {values_.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)});
    }
}

}  // namespace ahr
