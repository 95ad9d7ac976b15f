// Copyright 2026 The MP-MTL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MPMTL_ERROR_H_
#define MPMTL_ERROR_H_

#include <stdexcept>
#include <string>

namespace mpmtl {

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on the inputs was violated (shape mismatch, non-finite
// entries, out-of-range parameters).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// An iterative solver produced a NaN or an entry whose magnitude exceeded the
// divergence threshold.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int iteration)
      : Error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

// A run configuration could not be parsed or validated.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpmtl

#endif  // MPMTL_ERROR_H_
