/*
 * Copyright (c) 2026, hxid contributors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace hxid {

/// Error categories; these map 1:1 onto the C API status codes.
enum class ErrorKind {
  argument,  ///< invalid argument value (bad window, dt <= 0, ...)
  data,      ///< malformed or insufficient input data
  domain,    ///< input outside the mathematical domain (non-finite, ...)
  singular,  ///< a linear system has no unique solution
  io,        ///< file could not be read or written
  internal,  ///< broken internal invariant
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hxid
