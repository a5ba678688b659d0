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

#include "ahr/grid.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ahr/errors.h"

namespace ahr {

QuadratureGrid::QuadratureGrid(double x_min, double x_max, int points)
    : x_min_(x_min), x_max_(x_max), points_(points) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
        throw ConfigError("grid", "require finite x_min < x_max");
    }
    if (points < 3 || points % 2 == 0) {
        throw ConfigError("grid.points", "must be an odd integer >= 3, got " + std::to_string(points));
    }
}

QuadratureGrid QuadratureGrid::standard() {
    return QuadratureGrid(-10.0, 10.0, 4001);
}

}  // namespace ahr
