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

#ifndef AHR_GRID_H
#define AHR_GRID_H

namespace ahr {

/// Uniform quadrature grid [x_min, x_max] with an odd number of nodes.
class QuadratureGrid {
   public:
    QuadratureGrid(double x_min, double x_max, int points);
    /// [-10, 10] with 4001 nodes (spacing 0.005).
    static QuadratureGrid standard();

    double x_min() const {
        return x_min_;
    }
    double x_max() const {
        return x_max_;
    }
    int points() const {
        return points_;
    }
    double spacing() const {
        return (x_max_ - x_min_) / (points_ - 1);
    }
    double node(int i) const {
        return x_min_ + i * spacing();
    }

    bool operator==(const QuadratureGrid &) const = default;

   private:
    double x_min_;
    double x_max_;
    int points_;
};

}  // namespace ahr

#endif
