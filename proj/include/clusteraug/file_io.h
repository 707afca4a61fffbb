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

#ifndef CLUSTERAUG_FILE_IO_H_
#define CLUSTERAUG_FILE_IO_H_

#include <string>

namespace clusteraug {

// Reads a whole file; "-" reads standard input.
std::string ReadFileOrDie(const std::string& path);

// Writes via a temporary sibling file and rename(2), so readers never see a
// partial file. "-" writes to standard output.
void WriteFileAtomic(const std::string& path, const std::string& contents);

}  // namespace clusteraug

#endif  // CLUSTERAUG_FILE_IO_H_
