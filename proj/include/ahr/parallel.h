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

#ifndef AHR_PARALLEL_H
#define AHR_PARALLEL_H

#include <cstddef>
#include <functional>

namespace ahr {

/// Calls fn(0..count-1) on up to `workers` threads. If any call throws, the
/// exception from the lowest index is rethrown after all workers finish.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)> &fn);

}  // namespace ahr

#endif  // AHR_PARALLEL_H
