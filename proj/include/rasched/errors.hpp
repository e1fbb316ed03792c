/*
Copyright 2026 The rasched Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace rasched {

// Process exit codes shared by every CLI subcommand.
namespace exit_code {
inline constexpr int success = 0;
inline constexpr int internal_error = 1;  // invariant violation, proof-level failure
inline constexpr int infeasible = 2;      // certified stuck / infeasible target
inline constexpr int validation = 3;      // bad input data or failed verification
inline constexpr int size_guard = 4;      // enumeration guard exceeded
}  // namespace exit_code

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class GuardExceeded : public std::runtime_error {
 public:
  explicit GuardExceeded(const std::string& what) : std::runtime_error(what) {}
};

// A checked runtime property of the search failed. Always a bug, never
// an expected outcome.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

class IterationCapExceeded : public std::runtime_error {
 public:
  explicit IterationCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// A state handed to the witness builder still has a usable move.
class NotStuck : public std::invalid_argument {
 public:
  explicit NotStuck(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace rasched
