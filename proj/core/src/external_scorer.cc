// Copyright 2026 The cfair Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cfair/external_scorer.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>
#include <nlohmann/json.hpp>
#include <thread>
#include <unordered_map>

#include "cfair/errors.h"

namespace cfair {

using nlohmann::json;

namespace {

std::once_flag ignore_sigpipe_once;

std::string ErrnoMessage(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

void SetNonBlocking(int fd) {
  const int flags = fcntl(fd, F_GETFL, 0);
  fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

}  // namespace

ExternalScorer::ExternalScorer(std::string command)
    : command_(std::move(command)) {
  // A child that exits mid-write must surface as EPIPE, not kill us.
  std::call_once(ignore_sigpipe_once, [] { ::signal(SIGPIPE, SIG_IGN); });

  int in_pipe[2];   // parent writes -> child stdin
  int out_pipe[2];  // child stdout -> parent reads
  if (::pipe(in_pipe) != 0) throw ScorerError(ErrnoMessage("pipe"));
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw ScorerError(ErrnoMessage("pipe"));
  }
  pid_ = ::fork();
  if (pid_ < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) {
      ::close(fd);
    }
    throw ScorerError(ErrnoMessage("fork"));
  }
  if (pid_ == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) {
      ::close(fd);
    }
    ::execl("/bin/sh", "sh", "-c", command_.c_str(),
            static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  ::fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  ::fcntl(from_child_, F_SETFD, FD_CLOEXEC);
  SetNonBlocking(to_child_);
  SetNonBlocking(from_child_);
}

ExternalScorer::~ExternalScorer() { Shutdown(); }

void ExternalScorer::Shutdown() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ <= 0) return;
  // EOF asks the child to exit; give it a moment before killing it.
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::seconds(2);
  int status = 0;
  while (::waitpid(pid_, &status, WNOHANG) == 0) {
    if (std::chrono::steady_clock::now() > deadline) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  pid_ = -1;
}

void ExternalScorer::Probe() {
  const std::vector<std::string> tokens = {"probe"};
  Score(std::vector<ScoreRequest>{ScoreRequest{"__cfair_probe__", tokens}});
}

std::vector<double> ExternalScorer::Score(
    std::span<const ScoreRequest> requests) {
  if (broken_) {
    throw ScorerError("external scorer '" + command_ +
                      "' is unusable after an earlier failure");
  }
  std::unordered_map<std::string, std::size_t> pending;
  std::string outgoing;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    if (!pending.emplace(requests[i].id, i).second) {
      throw PreconditionError("duplicate scorer request id '" +
                              requests[i].id + "'");
    }
    json line = {{"id", requests[i].id},
                 {"text", JoinTokens(requests[i].tokens)}};
    outgoing += line.dump();
    outgoing += '\n';
  }

  std::vector<double> scores(requests.size(), 0.0);
  auto fail = [&](const std::string& message) -> ScorerError {
    broken_ = true;
    return ScorerError("external scorer '" + command_ + "': " + message);
  };
  auto first_missing = [&]() -> std::string {
    std::size_t best = requests.size();
    for (const auto& [id, index] : pending) best = std::min(best, index);
    return best < requests.size() ? requests[best].id : std::string();
  };

  std::size_t written = 0;
  bool write_closed = false;
  std::string line;
  while (!pending.empty()) {
    // Drain complete lines already buffered.
    while (ReadLine(&line)) {
      if (line.empty()) continue;
      json response;
      try {
        response = json::parse(line);
      } catch (const json::parse_error&) {
        throw fail("malformed response line: " + line);
      }
      if (!response.is_object() || !response.contains("id") ||
          !response["id"].is_string()) {
        throw fail("response without string id: " + line);
      }
      const std::string id = response["id"].get<std::string>();
      auto it = pending.find(id);
      if (it == pending.end()) {
        throw fail("response for unknown or already answered id '" + id + "'");
      }
      if (auto err = response.find("error"); err != response.end()) {
        throw fail("error for '" + id + "': " +
                   (err->is_string() ? err->get<std::string>() : err->dump()));
      }
      auto lp = response.find("logprob");
      if (lp == response.end() || !lp->is_number()) {
        throw fail("response for '" + id + "' has no numeric logprob");
      }
      scores[it->second] = lp->get<double>();
      pending.erase(it);
    }
    if (pending.empty()) break;

    pollfd fds[2];
    nfds_t nfds = 0;
    fds[nfds++] = pollfd{from_child_, POLLIN, 0};
    const bool want_write = !write_closed && written < outgoing.size();
    if (want_write) fds[nfds++] = pollfd{to_child_, POLLOUT, 0};
    if (::poll(fds, nfds, -1) < 0) {
      if (errno == EINTR) continue;
      throw fail(ErrnoMessage("poll"));
    }
    if (want_write && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const ssize_t n = ::write(to_child_, outgoing.data() + written,
                                outgoing.size() - written);
      if (n > 0) {
        written += static_cast<std::size_t>(n);
      } else if (n < 0 && errno != EAGAIN && errno != EINTR) {
        // Child closed its stdin; whatever it already answered is still
        // readable, the rest will be reported missing.
        write_closed = true;
      }
    }
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      char buffer[65536];
      const ssize_t n = ::read(from_child_, buffer, sizeof(buffer));
      if (n > 0) {
        read_buffer_.append(buffer, static_cast<std::size_t>(n));
      } else if (n == 0) {
        // Process whatever is buffered, then report the first gap.
        if (!read_buffer_.empty() && read_buffer_.back() != '\n') {
          read_buffer_.push_back('\n');
          continue;
        }
        throw fail("process exited without answering '" + first_missing() +
                   "'");
      } else if (errno != EAGAIN && errno != EINTR) {
        throw fail(ErrnoMessage("read"));
      }
    }
  }
  return scores;
}

bool ExternalScorer::ReadLine(std::string* line) {
  const std::size_t newline = read_buffer_.find('\n');
  if (newline == std::string::npos) return false;
  line->assign(read_buffer_, 0, newline);
  if (!line->empty() && line->back() == '\r') line->pop_back();
  read_buffer_.erase(0, newline + 1);
  return true;
}

}  // namespace cfair
