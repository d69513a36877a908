// Copyright 2026 The uavrisk Authors
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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace uavrisk
{

/// Base class for all uavrisk errors.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Failure to read or write a file.
class IoError : public Error
{
public:
  using Error::Error;
};

/// Malformed input text. Carries the 1-based line number when known.
class ParseError : public Error
{
public:
  ParseError(const std::string & message, std::int64_t line = 0)
  : Error(message), line_(line)
  {
  }

  [[nodiscard]] std::int64_t line() const { return line_; }

private:
  std::int64_t line_;
};

/// Well-formed input that violates a dataset or configuration invariant.
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// Scale estimation could not run (e.g. no car detections in the dataset).
class EstimationError : public Error
{
public:
  using Error::Error;
};

}  // namespace uavrisk
