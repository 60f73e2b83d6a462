// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DEVLAB_ERRORS_HPP
#define DEVLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace devlab {

// The CLI maps these onto its exit-code scheme (1 usage, 2 capacity, 3 I/O).
struct ParamError : std::invalid_argument {
  explicit ParamError(const std::string& msg) : std::invalid_argument(msg) {}
};

struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace devlab

#endif  // DEVLAB_ERRORS_HPP
