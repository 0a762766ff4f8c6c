/* Copyright 2026 The alias_scope Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef ALIAS_SCOPE_PARALLEL_H_
#define ALIAS_SCOPE_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace alias_scope {

// Worker count: ALIAS_SCOPE_THREADS when set to a positive integer, else the
// hardware concurrency.
int MaxThreads();

// Runs body(i) for i in [0, n). Each index runs exactly once; callers write
// results into per-index slots so output never depends on scheduling. The
// first exception thrown by a worker is rethrown on the calling thread.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace alias_scope

#endif  // ALIAS_SCOPE_PARALLEL_H_
