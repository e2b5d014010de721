// Copyright 2026 The Adaptive IR Authors.
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

#ifndef ADAPTIVE_IR_ERROR_H_
#define ADAPTIVE_IR_ERROR_H_

#include <stdexcept>
#include <string>

namespace adaptive_ir {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

// Violated precondition on a caller-supplied argument.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Input file exists but its content is malformed or of the wrong version.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace adaptive_ir

#endif  // ADAPTIVE_IR_ERROR_H_
