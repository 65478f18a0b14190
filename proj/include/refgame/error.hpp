// Copyright 2026 The refgame Authors
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

#include <stdexcept>
#include <string>

namespace refgame {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: wrong dimensions, unknown labels, violated invariants.
/// The CLI maps this to exit code 2.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A solver or decomposition could not deliver its contract.
/// The CLI maps this to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

namespace detail {

[[noreturn]] inline void fail_precondition(const std::string& what) {
  throw PreconditionError(what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail_precondition(what);
}

}  // namespace detail
}  // namespace refgame
