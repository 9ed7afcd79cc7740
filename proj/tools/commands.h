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


#ifndef CFAIR_TOOLS_COMMANDS_H_
#define CFAIR_TOOLS_COMMANDS_H_

#include <memory>
#include <string>

#include "CLI11.hpp"
#include "cfair/lexicon.h"
#include "cfair/scoring.h"

namespace cfair::tools {

void AddDataCommands(CLI::App& app);
void AddModelCommands(CLI::App& app);

// Empty path: the bundled lexicon.
SgtLexicon LoadLexicon(const std::string& path);

// Exactly one of `model_path` (n-gram model file) or `command` (external
// process) must be set; throws ValidationError otherwise.
std::unique_ptr<Scorer> MakeScorer(const std::string& model_path,
                                   const std::string& command);

// Name of the scored-sets file inside a `--scores` / `--sets` directory.
inline constexpr const char* kScoredSetsFile = "scored_sets.jsonl";

}  // namespace cfair::tools

#endif  // CFAIR_TOOLS_COMMANDS_H_
