/*
 * Copyright 2026 The sqlbias Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SQLBIAS_ERRORS_HPP
#define SQLBIAS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sqlbias {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input file exists but its content does not match the expected format.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

/// A loaded object violates a structural invariant (dangling index, duplicate
/// name, empty identifier).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Filesystem-level failure (missing file, unwritable directory).
class IoFailure : public Error {
 public:
  using Error::Error;
};

/// An example references a db_id with no loaded schema.
class UnknownDatabase : public Error {
 public:
  using Error::Error;
};

/// Caller violated an operation precondition.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// External judge endpoint unreachable after bounded retries.
class JudgeUnavailable : public Error {
 public:
  using Error::Error;
};

/// A table required a relevance judgment that the judgment set does not cover.
class MissingJudgment : public Error {
 public:
  using Error::Error;
};

/// Prediction list length differs from the example list it is scored against.
class LengthMismatch : public Error {
 public:
  using Error::Error;
};

/// An aggregate was requested over an empty collection.
class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// Bad run configuration (missing endpoint, empty lexicon, unknown flag value).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// No human head noun found in a question; the example is skipped.
class NoHumanHeadNoun : public Error {
 public:
  using Error::Error;
};

/// SQL text does not match the supported grammar. Carries the byte offset of
/// the offending token.
class Unparseable : public Error {
 public:
  Unparseable(const std::string& message, std::size_t offset)
      : Error(message), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace sqlbias

#endif  // SQLBIAS_ERRORS_HPP
