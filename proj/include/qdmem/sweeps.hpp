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
#include <optional>
#include <string>
#include <vector>

#include "qdmem/optimizer.hpp"
#include "qdmem/run_config.hpp"

namespace qdmem {

inline constexpr const char* kFormatVersion = "1.0";
inline constexpr const char* kCatalogVersion = "rb87-1";

/// Scheme, grid and photon described by a resolved RunConfig.
struct Setup {
  LevelScheme scheme;
  SimGrid grid;
  PhotonWaveform photon;
};

Setup make_setup(const RunConfig& cfg);
/// Trial pulses: the init_pulse file if given, else one Gaussian per centre.
std::vector<ControlPulse> initial_pulses(const RunConfig& cfg, const SimGrid& grid);

enum class SweepKind { optical_depth, detuning_reoptimize, config_table, high_od };

std::string to_string(SweepKind k);
SweepKind sweep_kind_from_string(const std::string& name);

struct SweepSpec {
  SweepKind kind = SweepKind::optical_depth;
  /// optical-depth: d values. detuning-reoptimize: delta in units of Delta_e.
  /// config-table, high-od: optical depths applied to every label.
  std::vector<double> points;
  std::vector<std::string> labels;  // config-table and high-od rows
  RunConfig base;                   // resolved
  bool warm_start = true;
  double point_budget_s = 7200.0;

  /// Kind-specific defaults for empty points/labels.
  static SweepSpec from_config(const RunConfig& cfg);
  void validate() const;
};

/// Twelve log-spaced optical depths from 10 to 1000 that include 10, 26.4, 78, 230, 678.
std::vector<double> default_depth_points();
/// -2 ... 3 in steps of 1/20 (units of Delta_e).
std::vector<double> default_detuning_points();

struct SweepRecord {
  std::size_t index = 0;
  std::string label;       // scheme label, or a row name for cross rows
  std::string scheme;      // scheme actually solved
  std::string cross_from;  // source row of a cross-evaluated pulse
  double param = 0.0;
  double d = 0.0;
  double delta = 0.0;  // rad/ns, delta_g = delta_s
  std::string status = "ok";  // ok | failed | timeout
  std::string error;
  double eta_s = 0.0;
  std::optional<double> eta_r;
  double eta_tot = 0.0;
  double omega_m = 0.0;
  double balance_defect = 0.0;
  bool converged = false;
  int iterations = 0;
  int start_index = 0;
  std::string stop_reason;
  std::vector<std::string> warnings;
  std::vector<double> pulse;  // gamma units on the sweep grid
};

struct SweepResult {
  std::string kind;
  std::string table;  // table id when produced by run_table
  RunConfig config;
  bool warm_start = false;
  std::vector<SweepRecord> records;

  bool all_failed() const;
  const SweepRecord* find(const std::string& label) const;
};

/// Runs every point. Cold starts run in parallel over points; warm-started
/// chains run in point order on one thread. Records come back in point order.
SweepResult run_sweep(const SweepSpec& spec, int workers);

/// Table ids: D2-stretch, D2-clock, D1-stretch, D1-clock, scenarios.
std::vector<std::string> table_ids();

/// Optimizes each configuration row of a table and appends its cross rows.
SweepResult run_table(const std::string& table_id, double d, const RunConfig& base, int workers);

/// JSON document with format_version, provenance and per-record arrays.
std::string sweep_to_json(const SweepResult& r);
SweepResult sweep_from_json(const std::string& text);
/// One line per record: label, param, d, delta, status, eta_s, eta_tot, omega_m.
std::string sweep_to_csv(const SweepResult& r);

}  // namespace qdmem
