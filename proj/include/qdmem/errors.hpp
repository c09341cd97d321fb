/* Copyright 2026 The qdmem Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdmem {

// Numeric values are part of the C ABI (see qdmem.h); do not renumber.
enum class ErrorCode : int {
  ok = 0,
  invalid_argument = 1,
  domain = 2,
  catalog = 3,
  parameter = 4,
  grid_mismatch = 5,
  solver_instability = 6,
  undefined_ratio = 7,
  stagnation = 8,
  io = 9,
  report = 10,
  not_converged = 11,
  internal = 99,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a field sample turns NaN/inf during stepping.
class SolverInstability : public Error {
 public:
  SolverInstability(std::size_t z_index, std::size_t t_index)
      : Error(ErrorCode::solver_instability,
              "non-finite field at grid index (z=" + std::to_string(z_index) +
                  ", t=" + std::to_string(t_index) + ")"),
        z_index_(z_index),
        t_index_(t_index) {}
  std::size_t z_index() const noexcept { return z_index_; }
  std::size_t t_index() const noexcept { return t_index_; }

 private:
  std::size_t z_index_;
  std::size_t t_index_;
};

}  // namespace qdmem
