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


// JSONL dataset rows: {"id": string, "text": string, "label": 0|1}. Labels
// are optional for scoring-only commands.

#ifndef CFAIR_DATASET_H_
#define CFAIR_DATASET_H_

#include <string>
#include <string_view>
#include <vector>

#include "cfair/text.h"

namespace cfair {

enum class LabelRequirement { kOptional, kRequired };

// Throws ValidationError naming the line for malformed rows, duplicate ids,
// labels outside {0, 1}, or a missing label when required.
std::vector<Document> ParseDatasetJsonl(std::string_view content,
                                        LabelRequirement labels);
std::vector<Document> ReadDatasetJsonl(const std::string& path,
                                       LabelRequirement labels);

std::string DatasetToJsonl(const std::vector<Document>& docs);
void WriteDatasetJsonl(const std::string& path,
                       const std::vector<Document>& docs);

// Whole-file helpers shared by the tools. ReadFile throws ValidationError
// when the file cannot be opened; WriteFile throws std::runtime_error.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view content);

}  // namespace cfair

#endif  // CFAIR_DATASET_H_
