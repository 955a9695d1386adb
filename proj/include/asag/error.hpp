// Copyright 2026 The asag authors
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

#ifndef ASAG_ERROR_HPP_
#define ASAG_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace asag {

/// Base class for all recoverable library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem-level failures (missing path, unreadable file).
/// The CLI maps these to exit status 2.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace asag

#endif  // ASAG_ERROR_HPP_
