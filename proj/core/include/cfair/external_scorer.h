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

// Line-delimited JSON scoring over a child process's stdin/stdout.
//
//   request  (toolkit -> child): {"id": "<id>", "text": "<tokens joined by spaces>"}
//   response (child -> toolkit): {"id": "<id>", "logprob": -12.5}
//                             or {"id": "<id>", "error": "<message>"}
//
// Responses may come back in any order but every id must be answered exactly
// once. Closing the child's stdin (EOF) asks it to exit. The command runs via
// /bin/sh -c, so it may contain arguments and redirections.

#ifndef CFAIR_EXTERNAL_SCORER_H_
#define CFAIR_EXTERNAL_SCORER_H_

#include <sys/types.h>

#include <string>

#include "cfair/scoring.h"

namespace cfair {

class ExternalScorer : public Scorer {
 public:
  // Spawns the command. Throws ScorerError if the process cannot be created;
  // a command that fails to exec surfaces on the first Score call (or Probe).
  explicit ExternalScorer(std::string command);
  ~ExternalScorer() override;

  ExternalScorer(const ExternalScorer&) = delete;
  ExternalScorer& operator=(const ExternalScorer&) = delete;

  // Throws ScorerError naming the offending id on an error response, a
  // malformed or unknown response, or the child exiting early. After a
  // failure the scorer is unusable.
  std::vector<double> Score(std::span<const ScoreRequest> requests) override;

  // Round-trips one tiny request to verify the child speaks the protocol.
  void Probe();

  const std::string& command() const { return command_; }

 private:
  void Shutdown();
  bool ReadLine(std::string* line);

  std::string command_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string read_buffer_;
  bool broken_ = false;
};

}  // namespace cfair

#endif  // CFAIR_EXTERNAL_SCORER_H_
