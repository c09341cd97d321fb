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

#include <cstdint>
#include <string>
#include <vector>

#include "qdmem/optimizer.hpp"

namespace qdmem {

/// Everything needed to reproduce a run. Serialized as sectioned key = value
/// text; every key can also be set as "section.key" from the command line.
struct RunConfig {
  // [scheme]
  std::string scheme = "D2-clock-config4";
  double d = 75.0;
  double delta_g_mhz = 0.0;
  double delta_s_mhz = 0.0;
  // [grid]
  std::size_t n_z = 3000;
  std::size_t n_t = 3000;
  double T = 0.0;  // ns; 0 resolves to 10 * T1
  // [photon]
  std::string waveform = "sharp-exponential";
  double T1 = 1.0;
  double T_L = 0.01;
  // [ascent]
  AscentConfig ascent;
  std::vector<double> init_centers;  // ns; empty resolves to {T / 2, 2 T1}
  double init_width = 0.0;   // ns; 0 resolves to T1
  double init_amplitude = 10.0;
  std::string init_pulse;  // CSV path, overrides the Gaussian
  // [solve]
  std::string pulse;  // CSV path; empty means zero control
  // [noise]
  std::vector<double> wander_widths = {0.0, 0.5, 1.0, 2.0, 4.0, 6.0};  // units of 1/T1
  std::size_t scan_points = 241;
  std::vector<double> d_phi = {0.5, 1.0, 2.0, 4.0};  // units of 1/T1
  int n_traj = 100;
  std::uint64_t seed = 20120901;
  // [sweep]
  std::string sweep_kind = "optical-depth";
  std::vector<double> points;  // empty: kind-specific defaults
  std::vector<std::string> labels;
  bool warm_start = true;
  std::string table = "D2-clock";
  // [output]
  std::string out;
  std::string csv_dir;
  std::string dump_trace;
  std::string dump_pulse;
  bool timestamps = false;

  /// Sets one key ("section.key" or a bare unique key). Throws on unknown keys.
  void set(const std::string& key, const std::string& value);
  /// Applies every assignment in sectioned key = value text.
  void load_text(const std::string& text);
  /// Reads a config file, or the config echoed inside a JSON result file.
  void load_file(const std::string& path);
  /// Fills derived defaults (T, init centre/width) and validates.
  RunConfig resolved() const;
  std::string to_text() const;
  std::vector<std::string> keys() const;
  std::string get(const std::string& key) const;

  double window() const { return T > 0.0 ? T : 10.0 * T1; }
};

}  // namespace qdmem
