// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FLUXQP_ERRORS_HPP
#define FLUXQP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fluxqp {

// Invalid physical parameters or malformed configuration input. Mapped to
// CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative numerical procedure failed to converge within its budget
// (basis-size doubling, eigensolver, nonlinear fit). Mapped to CLI exit
// code 3.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem / serialization failure. Mapped to CLI exit code 4.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fluxqp

#endif  // FLUXQP_ERRORS_HPP
