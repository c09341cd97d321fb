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
#include <vector>

#include "qdmem/sweeps.hpp"

namespace qdmem {

/// Published row: efficiencies in percent, omega_m in gamma (NaN when not given).
struct ReferenceRow {
  std::string label;
  double eta_s_pct;
  double eta_tot_pct;
  double omega_m;
};

/// Reference ids: table-II, table-IV, table-VI, table-VIII, scenarios, none.
std::vector<std::string> reference_ids();
std::vector<ReferenceRow> reference_rows(const std::string& reference);
/// Table id (as used by run_table) that produces rows for a reference.
std::string reference_table(const std::string& reference);

struct RenderedReport {
  std::string text;
  std::string csv;
  bool all_pass = true;
  double tolerance_pts = 2.0;
};

/// Efficiency tolerance in points: 1 on a 3000 x 3000 (or finer) grid, else 2.
double report_tolerance(const RunConfig& cfg);

/// Side-by-side listing. With a reference every reference row must be present
/// in the results (Error(report) otherwise); omega_m passes within 10%.
RenderedReport render_report(const SweepResult& results, const std::string& reference);

}  // namespace qdmem
