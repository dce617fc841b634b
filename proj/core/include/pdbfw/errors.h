// Copyright 2026 The PDBFW Authors
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

#ifndef PDBFW_ERRORS_H_
#define PDBFW_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdbfw {

// Bad argument to a public operation: negative radius, budget out of range,
// mismatched dimensions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A solver configuration that cannot be turned into finite step sizes.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A non-finite objective appeared during a solve.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& solver, long iteration)
      : std::runtime_error(solver + " diverged at iteration " +
                           std::to_string(iteration)),
        iteration_(iteration) {}
  long iteration() const { return iteration_; }

 private:
  long iteration_;
};

// Block power iteration did not reach its residual tolerance.
class ApproximationError : public std::runtime_error {
 public:
  ApproximationError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Malformed input text. line() is 1-based; 0 means "whole input".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " +
                           message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace pdbfw

#endif  // PDBFW_ERRORS_H_
