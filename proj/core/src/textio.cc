// Copyright 2026 The AVLR Authors. All Rights Reserved.
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

#include "avlr/textio.h"

#include <charconv>
#include <system_error>

#include "avlr/errors.h"

namespace avlr::textio {

std::string FormatDouble(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("FormatDouble: buffer too small");
  return std::string(buf, end);
}

double ParseDouble(std::string_view token, std::size_t line) {
  double value = 0.0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size()) {
    throw ParseError("expected a number, got '" + std::string(token) + "'", line);
  }
  return value;
}

std::int64_t ParseInt(std::string_view token, std::size_t line) {
  std::int64_t value = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size()) {
    throw ParseError("expected an integer, got '" + std::string(token) + "'", line);
  }
  return value;
}

std::uint64_t ParseU64(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size()) {
    throw ParseError("expected an unsigned integer, got '" + std::string(token) + "'", line);
  }
  return value;
}

std::vector<std::string_view> SplitWhitespace(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\r') ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view ExpectKeyValue(std::string_view token, std::string_view expected_key,
                                std::size_t line) {
  const auto eq = token.find('=');
  if (eq == std::string_view::npos || token.substr(0, eq) != expected_key) {
    throw ParseError("expected '" + std::string(expected_key) + "=...', got '" +
                         std::string(token) + "'",
                     line);
  }
  return token.substr(eq + 1);
}

bool LineReader::Next(std::string& line) {
  if (!std::getline(in_, line)) return false;
  ++line_;
  return true;
}

void ExpectHeader(LineReader& reader, std::string_view magic, int version) {
  std::string line;
  if (!reader.Next(line)) throw ParseError("empty file, expected '" + std::string(magic) + "' header", 0);
  auto tokens = SplitWhitespace(line);
  if (tokens.size() != 2 || tokens[0] != magic) {
    throw ParseError("bad header, expected '" + std::string(magic) + " <version>'", 1);
  }
  const auto found = ParseInt(tokens[1], 1);
  if (found != version) {
    throw VersionError("unsupported " + std::string(magic) + " format version " +
                       std::to_string(found) + " (this build reads version " +
                       std::to_string(version) + ")");
  }
}

}  // namespace avlr::textio
