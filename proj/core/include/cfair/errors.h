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

#ifndef CFAIR_ERRORS_H_
#define CFAIR_ERRORS_H_

#include <stdexcept>

namespace cfair {

// Malformed user input: lexicon files, datasets, configs, hyperparameters.
// The command line tool maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's contract (e.g. a mention span outside the
// document). Also exit code 1.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Failure of a likelihood scorer (external process died, protocol error,
// per-item error response). Exit code 2.
class ScorerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cfair

#endif  // CFAIR_ERRORS_H_
