// Copyright 2026 The mglab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MGLAB_ERROR_HPP_
#define MGLAB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace mglab {

enum class ErrorKind {
  kValidation,  // bad input: dimensions, ranges, caps
  kNumerical,   // solver did not reach its residual
  kIo,          // unreadable / unwritable file
};

// All library failures are reported as mglab::Error. `origin` names the
// module that raised it ("game-core", "bandit-core", ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string origin, const std::string& what)
      : std::runtime_error("[" + origin + "] " + what),
        kind_(kind),
        origin_(std::move(origin)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& origin() const { return origin_; }

 private:
  ErrorKind kind_;
  std::string origin_;
};

[[noreturn]] inline void Fail(const char* origin, const std::string& what) {
  throw Error(ErrorKind::kValidation, origin, what);
}

inline void Require(bool cond, const char* origin, const std::string& what) {
  if (!cond) Fail(origin, what);
}

}  // namespace mglab

#endif  // MGLAB_ERROR_HPP_
