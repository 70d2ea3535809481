// Copyright 2026 The XFL Authors
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

namespace xfl {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user input: config schema violations, role-count violations, value
// range errors. Maps to CLI exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem / environment problems. Maps to CLI exit code 2.
class IoError : public Error {
 public:
  using Error::Error;
};

class CryptoError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public TransportError {
 public:
  using TransportError::TransportError;
};

// A federation protocol step went wrong (wrong message, missing party,
// aborted stage).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace xfl
