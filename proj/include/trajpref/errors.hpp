// Copyright 2026 The trajpref Authors
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

#ifndef TRAJPREF__ERRORS_HPP_
#define TRAJPREF__ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trajpref
{

/// Malformed input file; carries the 1-based line number of the offending record.
class ParseError : public std::runtime_error
{
public:
  ParseError(std::size_t line, const std::string & what)
  : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
  {
  }

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class ConfigError : public std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/// An upstream pipeline artifact is absent.
class MissingArtifactError : public std::runtime_error
{
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error
{
  using std::runtime_error::runtime_error;
};

}  // namespace trajpref

#endif  // TRAJPREF__ERRORS_HPP_
