// Copyright 2026 The clusteraug Authors.
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

#include "clusteraug/parallel.h"

#include <omp.h>

#include <algorithm>

namespace clusteraug {

void SetNumThreads(int threads) { omp_set_num_threads(std::max(threads, 1)); }

int NumThreads() { return omp_get_max_threads(); }

int HardwareThreads() { return std::max(omp_get_num_procs(), 1); }

}  // namespace clusteraug
