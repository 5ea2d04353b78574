// Copyright 2026 The efgraph Authors.
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

#ifndef EFGRAPH_ERROR_HPP
#define EFGRAPH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace efg {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structural problems with a game tree (cycles, invalid links, failed
// validation during construction).
class GameError : public Error {
 public:
  enum class Kind {
    kCyclicInfosets,
    kOrphanNode,
    kUnknownAction,
    kInfosetMixedPlayers,
    kValidationFailed,
    kInvalidArgument,
  };

  GameError(Kind kind, const std::string& message)
      : Error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// A positioned error produced while tokenizing a `.game` document.
class ParseError : public Error {
 public:
  enum class Kind { kSyntax, kMissingParameter, kDuplicateName, kUnknownNode };

  ParseError(Kind kind, int line, const std::string& message)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message
                       : message),
        kind_(kind),
        line_(line) {}

  Kind kind() const { return kind_; }
  // 1-based; 0 when the error is not tied to a line.
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

// Graph construction and evaluation failures.
class GraphError : public Error {
 public:
  enum class Kind {
    kUnknownInput,
    kUnknownTarget,
    kPhaseViolation,
    kNoPhase,
    kShapeMismatch,
    kDomainError,
    kInvalidStrategy,
  };

  GraphError(Kind kind, const std::string& message)
      : Error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace efg

#endif  // EFGRAPH_ERROR_HPP
