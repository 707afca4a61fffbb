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

#ifndef CLUSTERAUG_TOOLS_CLI_H_
#define CLUSTERAUG_TOOLS_CLI_H_

#include <string>
#include <vector>

namespace clusteraug::cli {

// Exit status: 0 success, 1 input or validation error, 2 transport error.
int Run(int argc, char** argv);
int Run(const std::vector<std::string>& args);

}  // namespace clusteraug::cli

#endif  // CLUSTERAUG_TOOLS_CLI_H_
