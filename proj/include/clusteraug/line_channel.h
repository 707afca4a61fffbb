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

#ifndef CLUSTERAUG_LINE_CHANNEL_H_
#define CLUSTERAUG_LINE_CHANNEL_H_

#include <sys/types.h>

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace clusteraug {

// A bidirectional newline-framed byte stream to a subprocess (stdin/stdout
// pipes) or a TCP peer. Not thread-safe; callers serialize access.
class LineChannel {
 public:
  // Runs `command` through /bin/sh -c.
  static std::unique_ptr<LineChannel> Spawn(const std::string& command);
  // `address` is "host:port".
  static std::unique_ptr<LineChannel> Connect(const std::string& address);

  LineChannel(const LineChannel&) = delete;
  LineChannel& operator=(const LineChannel&) = delete;
  ~LineChannel();

  // Writes `out` while reading complete lines, handing each to `on_line`
  // until it returns true. Reads and writes are interleaved, so arbitrarily
  // large batches cannot deadlock against a peer that answers as it reads.
  // Throws kTimeout when neither direction makes progress for `timeout`, and
  // kTransport on EOF or I/O errors.
  void Exchange(std::string_view out,
                const std::function<bool(std::string_view)>& on_line,
                std::chrono::milliseconds timeout);

 private:
  LineChannel(int read_fd, int write_fd, pid_t child);

  int read_fd_;
  int write_fd_;
  pid_t child_;
  std::string pending_;
};

}  // namespace clusteraug

#endif  // CLUSTERAUG_LINE_CHANNEL_H_
