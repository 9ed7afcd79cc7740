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

#include "cfair/text.h"

#include <cstdint>

namespace cfair {
namespace {

bool IsAsciiPunct(char c) {
  return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
         (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
}

bool IsUnicodeSpace(std::uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Decodes one code point starting at text[pos]; returns its byte length.
// Malformed sequences are consumed one byte at a time as opaque bytes.
std::size_t DecodeUtf8(std::string_view text, std::size_t pos,
                       std::uint32_t* cp) {
  const auto b0 = static_cast<unsigned char>(text[pos]);
  std::size_t len = 1;
  std::uint32_t value = b0;
  if (b0 >= 0xC0 && b0 < 0xE0) {
    len = 2;
    value = b0 & 0x1F;
  } else if (b0 >= 0xE0 && b0 < 0xF0) {
    len = 3;
    value = b0 & 0x0F;
  } else if (b0 >= 0xF0 && b0 < 0xF8) {
    len = 4;
    value = b0 & 0x07;
  }
  if (len == 1 || pos + len > text.size()) {
    *cp = b0 < 0x80 ? b0 : 0xFFFD;
    return 1;
  }
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(text[pos + i]);
    if ((b & 0xC0) != 0x80) {
      *cp = 0xFFFD;
      return 1;
    }
    value = (value << 6) | (b & 0x3F);
  }
  *cp = value;
  return len;
}

void FlushToken(std::string& current, Tokens& out) {
  std::size_t begin = 0;
  std::size_t end = current.size();
  while (begin < end && IsAsciiPunct(current[begin])) ++begin;
  while (end > begin && IsAsciiPunct(current[end - 1])) --end;
  if (end > begin) out.emplace_back(current.substr(begin, end - begin));
  current.clear();
}

}  // namespace

Tokens Tokenize(std::string_view text) {
  Tokens out;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::uint32_t cp = 0;
    const std::size_t len = DecodeUtf8(text, pos, &cp);
    if (IsUnicodeSpace(cp)) {
      FlushToken(current, out);
    } else if (len == 1) {
      char c = text[pos];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      current.push_back(c);
    } else {
      current.append(text.substr(pos, len));
    }
    pos += len;
  }
  FlushToken(current, out);
  return out;
}

std::string JoinTokens(std::span<const std::string> tokens,
                       std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.append(separator);
    out.append(tokens[i]);
  }
  return out;
}

Document MakeDocument(std::string id, std::string raw_text,
                      std::optional<int> label) {
  Document doc;
  doc.id = std::move(id);
  doc.tokens = Tokenize(raw_text);
  doc.raw_text = std::move(raw_text);
  doc.label = label;
  return doc;
}

Document DocumentFromTokens(std::string id, Tokens tokens,
                            std::optional<int> label) {
  Document doc;
  doc.id = std::move(id);
  doc.raw_text = JoinTokens(tokens);
  doc.tokens = std::move(tokens);
  doc.label = label;
  return doc;
}

}  // namespace cfair
