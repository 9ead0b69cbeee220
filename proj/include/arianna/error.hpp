// Copyright 2026 The ARIANNA Authors
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

#ifndef ARIANNA_ERROR_HPP
#define ARIANNA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace arianna {

/// Syntax or schema error in an input file. `where` carries "line:col" or a
/// JSON pointer, depending on the front end that raised it.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what),
        where_(std::move(where)) {}

  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Violation of a structural netlist invariant (multiple drivers,
/// combinational cycle, unresolved reference, width mismatch, ...).
class NetlistError : public std::runtime_error {
 public:
  explicit NetlistError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad or inconsistent flow configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Phase-level failure of the redaction flow (no candidates, no feasible
/// fabric, cluster cap exceeded, ...). `phase` names the failing stage.
class FlowError : public std::runtime_error {
 public:
  FlowError(std::string phase, const std::string& what)
      : std::runtime_error("[" + phase + "] " + what), phase_(std::move(phase)) {}

  const std::string& phase() const { return phase_; }

 private:
  std::string phase_;
};

}  // namespace arianna

#endif  // ARIANNA_ERROR_HPP
