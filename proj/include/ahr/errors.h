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

#ifndef AHR_ERRORS_H
#define AHR_ERRORS_H

#include <stdexcept>
#include <string>

namespace ahr {

/// Photon-number truncation too small for the requested state or operation.
struct CutoffError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Quadrature grid does not cover the support of a density.
struct GridError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A homodyne outcome fell where the density vanishes.
struct ZeroDensityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid configuration value. `field()` names the offending key.
class ConfigError : public std::invalid_argument {
   public:
    ConfigError(std::string field, const std::string &message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {
    }
    const std::string &field() const {
        return field_;
    }

   private:
    std::string field_;
};

}  // namespace ahr

#endif
