// Copyright 2026 The RadStack Authors
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

#ifndef RADSTACK_ERRORS_H_
#define RADSTACK_ERRORS_H_

#include <stdexcept>
#include <string>

namespace radstack {

// Base of every error thrown by the library. `module()` names the raising
// module so the CLI can print module-tagged messages.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}
  const std::string& module() const { return module_; }

 private:
  std::string module_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// `field()` is the path of the offending field or the invariant name.
class ValidationError : public Error {
 public:
  ValidationError(std::string module, std::string field, const std::string& what)
      : Error(std::move(module), field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class OffMapError : public Error {
 public:
  using Error::Error;
};

class DegenerateClusterError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class HorizonMismatchError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace radstack

#endif  // RADSTACK_ERRORS_H_
