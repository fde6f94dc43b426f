// Copyright 2026 The DUA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DUA_ERROR_HPP_
#define DUA_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace dua {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible tensor shapes; the message names the offending axes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or a negative variance.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Label or class index out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents (IDX, checkpoint).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// File system failures.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dua

#endif  // DUA_ERROR_HPP_
