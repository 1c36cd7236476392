/*
 * Copyright 2026 The fedgcn-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fedgcn {

// Base for every error raised by the library. Subclasses name the failure
// category so the CLI can report a structured error kind.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define FEDGCN_DEFINE_ERROR(Name, Kind)                                  \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& what) : Error(Kind, what) {}        \
  }

FEDGCN_DEFINE_ERROR(ParameterError, "parameter");
FEDGCN_DEFINE_ERROR(DegenerateInputError, "degenerate-input");
FEDGCN_DEFINE_ERROR(ShapeError, "shape");
FEDGCN_DEFINE_ERROR(IntegrityError, "integrity");
FEDGCN_DEFINE_ERROR(ProtocolError, "protocol");
FEDGCN_DEFINE_ERROR(IncompleteRoundError, "incomplete-round");
FEDGCN_DEFINE_ERROR(ConfigError, "configuration");
FEDGCN_DEFINE_ERROR(KeyError, "key");
FEDGCN_DEFINE_ERROR(BoundsError, "bounds");
FEDGCN_DEFINE_ERROR(DivergenceError, "divergence");
FEDGCN_DEFINE_ERROR(UndefinedMetricError, "undefined-metric");

#undef FEDGCN_DEFINE_ERROR

class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error("parse", file + ":" + std::to_string(line) + ": " + what),
        file_(file),
        line_(line) {}
  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace fedgcn
