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

#include "clusteraug/line_channel.h"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>

#include "clusteraug/error.h"

namespace clusteraug {

namespace {

[[noreturn]] void ThrowTransport(const std::string& message) {
  throw Error(ErrorKind::kTransport, message);
}

void SetNonBlocking(int fd) {
  int flags = ::fcntl(fd, F_GETFL, 0);
  if (flags < 0 || ::fcntl(fd, F_SETFL, flags | O_NONBLOCK) < 0) {
    ThrowTransport(std::string("fcntl: ") + std::strerror(errno));
  }
}

void IgnoreSigpipe() {
  static const bool once = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)once;
}

}  // namespace

LineChannel::LineChannel(int read_fd, int write_fd, pid_t child)
    : read_fd_(read_fd), write_fd_(write_fd), child_(child) {}

LineChannel::~LineChannel() {
  if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
  if (read_fd_ >= 0) ::close(read_fd_);
  if (child_ > 0) {
    // Closing stdin asks the child to finish; give it a moment, then kill.
    for (int i = 0; i < 50; ++i) {
      int status = 0;
      pid_t r = ::waitpid(child_, &status, WNOHANG);
      if (r == child_ || r < 0) return;
      ::usleep(10000);
    }
    ::kill(child_, SIGKILL);
    ::waitpid(child_, nullptr, 0);
  }
}

std::unique_ptr<LineChannel> LineChannel::Spawn(const std::string& command) {
  IgnoreSigpipe();
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) ThrowTransport("pipe failed");
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    ThrowTransport("pipe failed");
  }
  pid_t pid = ::fork();
  if (pid < 0) ThrowTransport(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  SetNonBlocking(to_child[1]);
  SetNonBlocking(from_child[0]);
  return std::unique_ptr<LineChannel>(
      new LineChannel(from_child[0], to_child[1], pid));
}

std::unique_ptr<LineChannel> LineChannel::Connect(const std::string& address) {
  IgnoreSigpipe();
  const std::size_t colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == address.size()) {
    ThrowInvalid("scorer address must be host:port, got '" + address + "'");
  }
  const std::string host = address.substr(0, colon);
  const std::string port = address.substr(colon + 1);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  if (int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &found);
      rc != 0) {
    ThrowTransport("resolve " + address + ": " + ::gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* ai = found; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(found);
  if (fd < 0) ThrowTransport("cannot connect to " + address);
  SetNonBlocking(fd);
  return std::unique_ptr<LineChannel>(new LineChannel(fd, fd, -1));
}

void LineChannel::Exchange(std::string_view out,
                           const std::function<bool(std::string_view)>& on_line,
                           std::chrono::milliseconds timeout) {
  std::size_t written = 0;
  bool done = false;

  // Lines left over from an earlier exchange are delivered first.
  auto drain = [&]() {
    std::size_t nl;
    while (!done && (nl = pending_.find('\n')) != std::string::npos) {
      std::string line = pending_.substr(0, nl);
      pending_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      done = on_line(line);
    }
  };
  drain();

  char buffer[1 << 16];
  while (!done) {
    pollfd fds[2];
    int nfds = 0;
    fds[nfds++] = {read_fd_, POLLIN, 0};
    const bool want_write = written < out.size();
    if (want_write) {
      if (write_fd_ == read_fd_) {
        fds[0].events |= POLLOUT;
      } else {
        fds[nfds++] = {write_fd_, POLLOUT, 0};
      }
    }
    int rc = ::poll(fds, nfds, static_cast<int>(timeout.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      ThrowTransport(std::string("poll: ") + std::strerror(errno));
    }
    if (rc == 0) {
      throw Error(ErrorKind::kTimeout,
                  "external tagger did not respond within " +
                      std::to_string(timeout.count()) + " ms");
    }
    for (int i = 0; i < nfds; ++i) {
      if (want_write && (fds[i].revents & (POLLOUT | POLLERR)) &&
          (fds[i].fd == write_fd_)) {
        ssize_t n;
        if (write_fd_ == read_fd_) {
          n = ::send(write_fd_, out.data() + written, out.size() - written,
                     MSG_NOSIGNAL);
        } else {
          n = ::write(write_fd_, out.data() + written, out.size() - written);
        }
        if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK &&
            errno != EINTR) {
          ThrowTransport(std::string("write to external tagger: ") +
                         std::strerror(errno));
        }
        if (n > 0) written += static_cast<std::size_t>(n);
      }
      if (fds[i].fd == read_fd_ &&
          (fds[i].revents & (POLLIN | POLLHUP | POLLERR))) {
        ssize_t n = ::read(read_fd_, buffer, sizeof(buffer));
        if (n < 0) {
          if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) {
            continue;
          }
          ThrowTransport(std::string("read from external tagger: ") +
                         std::strerror(errno));
        }
        if (n == 0) {
          ThrowTransport("external tagger closed the stream");
        }
        pending_.append(buffer, static_cast<std::size_t>(n));
        drain();
      }
    }
  }
}

}  // namespace clusteraug
