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

#ifndef AVLR_ERRORS_H_
#define AVLR_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace avlr {

// Malformed input file. `record()` is the 1-based line of the offending
// record, or 0 when the problem is not tied to a line (e.g. truncation).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t record)
      : std::runtime_error(record == 0
                               ? what
                               : what + " (line " + std::to_string(record) + ")"),
        record_(record) {}
  std::size_t record() const { return record_; }

 private:
  std::size_t record_;
};

class VersionError : public ParseError {
 public:
  explicit VersionError(const std::string& what) : ParseError(what, 1) {}
};

// (N, s) does not produce a valid sliding-window plan.
class ScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition of an operation does not hold (overlapping label
// sets, aux loss on a schedule that cannot cover every segment, ...).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NoPartnerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training produced a non-finite loss or parameter.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace avlr

#endif  // AVLR_ERRORS_H_
