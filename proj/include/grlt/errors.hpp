// Copyright 2026 The grlt Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grlt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration (bad group spec, bad loss weights, unknown keys).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Group or table would exceed the supported size.
class SizeBoundError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Latent space too small for the requested number of regular copies.
class CapacityError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Objects built over different groups (or fields) were combined.
class IncompatibleError : public Error {
 public:
  using Error::Error;
};

class UnsupportedRepresentationError : public Error {
 public:
  using Error::Error;
};

class MissingTableError : public Error {
 public:
  using Error::Error;
};

/// A table of permutations failed the group-action axioms.
class ActionAxiomError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

/// API misuse: calling an operation whose preconditions were not met.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content. Carries the byte offset at which parsing failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// A file written by an incompatible format version.
class UnsupportedVersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Numerical failure: non-convergence, singular matrix, non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An inverse node met a (numerically) singular matrix.
class SingularMatrixError : public NumericalError {
 public:
  SingularMatrixError(int node, double rcond)
      : NumericalError("singular matrix at inverse node " + std::to_string(node) +
                       " (reciprocal condition estimate " + std::to_string(rcond) + ")"),
        node_(node) {}

  int node() const { return node_; }

 private:
  int node_;
};

/// Training loss became non-finite or exceeded the divergence threshold.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace grlt
