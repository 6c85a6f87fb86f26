// Copyright 2026 The propaganda-lens Authors.
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

#ifndef PLENS_ERROR_HPP_
#define PLENS_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace plens {

// Process exit codes shared by every pipeline command.
enum class ExitCode : int {
  kOk = 0,
  kUsage = 1,       // usage error, missing argument or missing input
  kDataFormat = 2,  // malformed input file
  kDegenerate = 3,  // insufficient or degenerate data
};

// Base of all pipeline errors. Each subclass maps onto one exit code.
class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string &what)
      : Error(ExitCode::kUsage, what) {}
};

// Input file cannot be opened or read.
class IoError : public Error {
 public:
  explicit IoError(const std::string &what) : Error(ExitCode::kUsage, what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string &what)
      : Error(ExitCode::kDataFormat, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string &what)
      : Error(ExitCode::kDegenerate, what) {}
};

}  // namespace plens

#endif  // PLENS_ERROR_HPP_
