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

#ifndef AHR_HERMITE_H
#define AHR_HERMITE_H

#include <span>
#include <vector>

#include "ahr/grid.h"

namespace ahr {

/// Fills out[n] = chi_n(x), the normalized Hermite function <x|n> with
/// chi_0(x) = pi^{-1/4} exp(-x^2/2), for n < out.size().
void hermite_functions(double x, std::span<double> out);
std::vector<double> hermite_functions(double x, int count);

/// Row-major dim x dim matrix I[m][n] = integral_{-inf}^{x} chi_m chi_n.
///
/// Off-diagonal entries use the Wronskian identity
/// (chi_m' chi_n - chi_m chi_n')' = 2 (n - m) chi_m chi_n, the diagonal a
/// ladder recurrence seeded by erfc. For x > 0 the upper tail is evaluated
/// at -x by parity to keep relative accuracy.
std::vector<double> hermite_cumulative(double x, int dim);

/// Same matrix for integral_{x}^{inf} chi_m chi_n.
std::vector<double> hermite_upper_cumulative(double x, int dim);

/// chi_n tabulated on the nodes of a grid, n < dim.
class HermiteTable {
   public:
    HermiteTable(const QuadratureGrid &grid, int dim);

    const QuadratureGrid &grid() const {
        return grid_;
    }
    int dim() const {
        return dim_;
    }
    double chi(int n, int i) const {
        return values_[static_cast<std::size_t>(i) * dim_ + n];
    }
    /// chi_0..chi_{dim-1} at node i.
    std::span<const double> at_node(int i) const {
        return {values_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
    }

   private:
    QuadratureGrid grid_;
    int dim_;
    std::vector<double> values_;
};

}  // namespace ahr

#endif
