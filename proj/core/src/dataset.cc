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


#include "cfair/dataset.h"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "cfair/errors.h"

namespace cfair {

using nlohmann::json;

std::vector<Document> ParseDatasetJsonl(std::string_view content,
                                        LabelRequirement labels) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    auto bad = [&](const std::string& why) {
      return ValidationError("dataset line " + std::to_string(line_no) + ": " +
                             why);
    };
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      throw bad(std::string("invalid JSON (") + e.what() + ")");
    }
    if (!row.is_object()) throw bad("expected a JSON object");
    auto id = row.find("id");
    auto text = row.find("text");
    if (id == row.end() || !id->is_string()) throw bad("missing string 'id'");
    if (text == row.end() || !text->is_string()) {
      throw bad("missing string 'text'");
    }
    std::optional<int> label;
    if (auto l = row.find("label"); l != row.end() && !l->is_null()) {
      if (!l->is_number_integer() || (l->get<int>() != 0 && l->get<int>() != 1)) {
        throw bad("label must be 0 or 1");
      }
      label = l->get<int>();
    }
    if (!label && labels == LabelRequirement::kRequired) {
      throw bad("missing label");
    }
    std::string doc_id = id->get<std::string>();
    if (!seen.insert(doc_id).second) throw bad("duplicate id '" + doc_id + "'");
    docs.push_back(MakeDocument(std::move(doc_id), text->get<std::string>(),
                                label));
  }
  return docs;
}

std::vector<Document> ReadDatasetJsonl(const std::string& path,
                                       LabelRequirement labels) {
  return ParseDatasetJsonl(ReadFile(path), labels);
}

std::string DatasetToJsonl(const std::vector<Document>& docs) {
  std::string out;
  for (const Document& d : docs) {
    json row = {{"id", d.id},
                {"text", d.raw_text.empty() ? JoinTokens(d.tokens) : d.raw_text}};
    if (d.label) row["label"] = *d.label;
    out += row.dump();
    out += '\n';
  }
  return out;
}

void WriteDatasetJsonl(const std::string& path,
                       const std::vector<Document>& docs) {
  WriteFile(path, DatasetToJsonl(docs));
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace cfair
