// Copyright 2026 The weakfactor Authors. All Rights Reserved.
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

#ifndef WEAKFACTOR_ERRORS_HPP
#define WEAKFACTOR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace weakfactor {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* tag() const noexcept { return "error"; }
};

// Precondition or shape violation by the caller.
class ArgumentError : public Error {
 public:
  using Error::Error;
  const char* tag() const noexcept override { return "argument"; }
};

class NumericalError : public Error {
 public:
  using Error::Error;
  const char* tag() const noexcept override { return "numerical"; }
};

// ||L_{-1}|| = 0 in the plug-in estimator, or a singular leverage system.
class DegenerateLoadingError : public Error {
 public:
  using Error::Error;
  const char* tag() const noexcept override { return "degenerate_loading"; }
};

// trace(X' Pi X) <= 0 or ||X||_F = 0 in the panel estimators.
class DegenerateDesignError : public Error {
 public:
  using Error::Error;
  const char* tag() const noexcept override { return "degenerate_design"; }
};

class DimensionError : public Error {
 public:
  using Error::Error;
  const char* tag() const noexcept override { return "dimension"; }
};

// A constructed instance failed a parameter-space membership check.
class MembershipError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
  const char* tag() const noexcept override { return "membership"; }
};

}  // namespace weakfactor

#endif  // WEAKFACTOR_ERRORS_HPP
