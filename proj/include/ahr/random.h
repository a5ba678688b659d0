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

#ifndef AHR_RANDOM_H
#define AHR_RANDOM_H

#include <cstdint>
#include <random>

namespace ahr {

/// Seeded uniform stream. Substreams derived from (master, index, lane) are
/// independent of scheduling, so trial k always sees the same numbers.
class RandomStream {
   public:
    explicit RandomStream(std::uint64_t seed);
    static RandomStream substream(std::uint64_t master, std::uint64_t index, std::uint64_t lane = 0);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    std::uint64_t next_u64() {
        return engine_();
    }

   private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace ahr

#endif
