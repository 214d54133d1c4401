// Copyright 2026 The qfrag Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qfrag {

/// Base class for every error raised by the toolchain. The tag names the
/// module that raised it so CLI messages can be prefixed consistently.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Malformed or unsupported circuit input.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("circuit", "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnsupportedGateError : public ParseError {
 public:
  UnsupportedGateError(std::size_t line, const std::string& gate)
      : ParseError(line, "unsupported gate '" + gate + "'"), gate_(gate) {}

  const std::string& gate() const noexcept { return gate_; }

 private:
  std::string gate_;
};

class CircuitError : public Error {
 public:
  explicit CircuitError(const std::string& what) : Error("circuit", what) {}
};

class SimulationError : public Error {
 public:
  explicit SimulationError(const std::string& what) : Error("simulator", what) {}
};

class MetricError : public Error {
 public:
  explicit MetricError(const std::string& what) : Error("metrics", what) {}
};

class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what) : Error("learn", what) {}
};

class FragmentError : public Error {
 public:
  explicit FragmentError(const std::string& what) : Error("fragment", what) {}
};

class ReconstructError : public Error {
 public:
  explicit ReconstructError(const std::string& what) : Error("reconstruct", what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config", what) {}
};

}  // namespace qfrag
