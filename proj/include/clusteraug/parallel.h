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

#ifndef CLUSTERAUG_PARALLEL_H_
#define CLUSTERAUG_PARALLEL_H_

namespace clusteraug {

// Thread count used by the OpenMP kernels. Results never depend on it.
void SetNumThreads(int threads);
int NumThreads();
int HardwareThreads();

}  // namespace clusteraug

#endif  // CLUSTERAUG_PARALLEL_H_
