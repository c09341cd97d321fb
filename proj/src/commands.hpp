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

#include <string>

#include "qdmem/run_config.hpp"

namespace qdmem {

/// Outcome of one subcommand: the JSON document plus a status code
/// (0, or not_converged when an ascent stopped without converging).
struct CommandOutput {
  std::string json;
  int status = 0;
};

/// Commands: solve, optimize, sweep, table, noise-wander, noise-dephase,
/// fwm-check, catalog. Side files named in cfg.output are written here.
CommandOutput run_command(const std::string& command, const RunConfig& cfg, int workers);

}  // namespace qdmem
