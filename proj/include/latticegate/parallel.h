// Copyright 2026 The latticegate Authors
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

#ifndef LATTICEGATE_PARALLEL_H
#define LATTICEGATE_PARALLEL_H

#include <cstddef>
#include <exception>
#include <functional>

namespace latticegate {

/// Worker count: LATTICEGATE_THREADS if set and positive, else the hardware concurrency.
int thread_count();

/// Calls body(i) for i in [0, n) on up to thread_count() threads. Each index runs exactly once;
/// callers write into preallocated per-index slots and reduce afterwards in index order.
/// If any body throws, the exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

}  // namespace latticegate

#endif
