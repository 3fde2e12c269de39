// Copyright 2026 The Anchorpred Authors.
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

#ifndef ANCHORPRED_ERROR_HPP_
#define ANCHORPRED_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace anchorpred {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed corpus input. line() is 1-based; 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string &message, std::size_t line)
      : Error(line == 0 ? message
                        : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A caller broke a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Input data is well-formed but unusable (empty dataset, misaligned ids).
class DataError : public Error {
 public:
  using Error::Error;
};

// The external scorer violated the wire protocol or timed out.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace anchorpred

#endif  // ANCHORPRED_ERROR_HPP_
