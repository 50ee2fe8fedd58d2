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

// Helpers for the line-delimited text formats (corpus, checkpoints, refined
// labels, reports). Floats are written in shortest round-trip form so that
// load(save(x)) is bit-exact.

#ifndef AVLR_TEXTIO_H_
#define AVLR_TEXTIO_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace avlr::textio {

std::string FormatDouble(double value);

// Parsers throw ParseError carrying `line`.
double ParseDouble(std::string_view token, std::size_t line);
std::int64_t ParseInt(std::string_view token, std::size_t line);
std::uint64_t ParseU64(std::string_view token, std::size_t line);

std::vector<std::string_view> SplitWhitespace(std::string_view text);

// Reads "key=value" tokens. Throws ParseError when the token has no '=' or
// the key differs from `expected_key`.
std::string_view ExpectKeyValue(std::string_view token, std::string_view expected_key,
                                std::size_t line);

// Pulls lines from a stream while tracking the 1-based line number.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}
  // False at end of input.
  bool Next(std::string& line);
  std::size_t line_number() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

// Checks the "<magic> <version>" first line of a file.
void ExpectHeader(LineReader& reader, std::string_view magic, int version);

}  // namespace avlr::textio

#endif  // AVLR_TEXTIO_H_
