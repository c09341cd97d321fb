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
#include "qdmem/medium.hpp"

#include <cmath>
#include <sstream>

#include "qdmem/errors.hpp"
#include "qdmem/grid.hpp"

namespace qdmem {
namespace {

const double kD2Gamma = units::mhz(3.035);
const double kD2Split = units::mhz(156.95);
const double kD1Gamma = units::mhz(5.75 / 2.0);
const double kD1Split = units::mhz(814.5);
const double kScenarioSplit = units::mhz(100.0);

double r(double num, double den) { return std::sqrt(num / den); }

// D1 moments are entered in units of the D1 reduced element; the catalog
// applies kD1Factor on lookup.
constexpr double kS2 = 1.41421356237309504880;

}  // namespace

void LevelScheme::validate() const {
  auto bad = [&](const std::string& what) {
    throw Error(ErrorCode::parameter, "scheme '" + label + "': " + what);
  };
  if (!(gamma > 0.0) || !std::isfinite(gamma)) bad("gamma must be > 0");
  if (!(d >= 0.0) || !std::isfinite(d)) bad("optical depth d must be >= 0");
  for (double mu : {mu_1g, mu_1s, mu_2g, mu_2s}) {
    if (!std::isfinite(mu) || std::abs(mu) > 1.0 + 1e-12) bad("|mu| must not exceed 1");
  }
  if (!std::isfinite(delta_e) || !std::isfinite(delta_g) || !std::isfinite(delta_s)) {
    bad("detunings must be finite");
  }
}

Rb87Catalog::Rb87Catalog() {
  auto add = [&](std::string label, std::string line, std::string g, std::string s,
                 std::string e1, std::string e2, double m1g, double m1s, double m2g,
                 double m2s, double sign) {
    CatalogEntry e;
    e.label = std::move(label);
    e.line = line;
    e.ground_g = std::move(g);
    e.ground_s = std::move(s);
    e.excited_1 = std::move(e1);
    e.excited_2 = std::move(e2);
    e.raw_1g = m1g;
    e.raw_1s = m1s;
    e.raw_2g = m2g;
    e.raw_2s = m2s;
    if (line == "D1") {
      e.line_factor = kD1Factor;
      e.delta_e = sign * kD1Split;
      e.gamma = kD1Gamma;
    } else if (line == "D2") {
      e.line_factor = 1.0;
      e.delta_e = sign * kD2Split;
      e.gamma = kD2Gamma;
    } else {
      e.line_factor = 1.0;
      e.delta_e = sign * kScenarioSplit;
      e.gamma = kD2Gamma;
    }
    entries_.push_back(std::move(e));
  };

  add("ideal-3L", "ideal", "g", "s", "1", "", 1.0, 1.0, 0.0, 0.0, 1.0);
  add("4L+", "ideal", "g", "s", "1", "2", 1.0, 1.0, 1.0, 1.0, 1.0);
  add("4L-", "ideal", "g", "s", "1", "2", 1.0, 1.0, 1.0, -1.0, 1.0);

  // D2, |F=1,m=-1> and |F=2,m=1> through m'=0
  add("D2-stretch-config1", "D2", "|1,-1>", "|2,1>", "|1',0>", "|2',0>", r(5, 12), r(1, 20),
      r(1, 12), -0.5, 1.0);
  add("D2-stretch-config2", "D2", "|1,-1>", "|2,1>", "|2',0>", "|1',0>", r(1, 12), -0.5,
      r(5, 12), r(1, 20), -1.0);
  add("D2-stretch-config3", "D2", "|2,1>", "|1,-1>", "|1',0>", "|2',0>", r(1, 20), r(5, 12),
      -0.5, r(1, 12), 1.0);
  add("D2-stretch-config4", "D2", "|2,1>", "|1,-1>", "|2',0>", "|1',0>", -0.5, r(1, 12),
      r(1, 20), r(5, 12), -1.0);

  // D2 clock states through m'=1
  add("D2-clock-config1", "D2", "|1,0>", "|2,0>", "|1',1>", "|2',1>", r(5, 12), r(1, 60), 0.5,
      0.5, 1.0);
  add("D2-clock-config2", "D2", "|1,0>", "|2,0>", "|2',1>", "|1',1>", 0.5, 0.5, r(5, 12),
      r(1, 60), -1.0);
  add("D2-clock-config3", "D2", "|2,0>", "|1,0>", "|1',1>", "|2',1>", r(1, 60), r(5, 12), 0.5,
      0.5, 1.0);
  add("D2-clock-config4", "D2", "|2,0>", "|1,0>", "|2',1>", "|1',1>", 0.5, 0.5, r(1, 60),
      r(5, 12), -1.0);

  // D1 tables already include the 1/sqrt(2) factor; store raw D1 values.
  add("D1-stretch-config1", "D1", "|1,-1>", "|2,1>", "|1',0>", "|2',0>", -r(1, 12) * kS2,
      0.5 * kS2, -r(1, 12) * kS2, -0.5 * kS2, 1.0);
  add("D1-stretch-config2", "D1", "|2,1>", "|1,-1>", "|1',0>", "|2',0>", 0.5 * kS2,
      -r(1, 12) * kS2, -0.5 * kS2, -r(1, 12) * kS2, 1.0);
  add("D1-clock-config1", "D1", "|1,0>", "|2,0>", "|1',1>", "|2',1>", -r(1, 12) * kS2,
      r(1, 12) * kS2, -0.5 * kS2, 0.5 * kS2, 1.0);
  add("D1-clock-config2", "D1", "|1,0>", "|2,0>", "|2',1>", "|1',1>", -0.5 * kS2, 0.5 * kS2,
      -r(1, 12) * kS2, r(1, 12) * kS2, -1.0);
  add("D1-clock-config3", "D1", "|1,0>", "|2,0>", "|2',1>", "", -0.5 * kS2, 0.5 * kS2, 0.0,
      0.0, -1.0);
}

const Rb87Catalog& Rb87Catalog::instance() {
  static const Rb87Catalog catalog;
  return catalog;
}

std::vector<std::string> Rb87Catalog::labels() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.label);
  return out;
}

const CatalogEntry* Rb87Catalog::find(std::string_view label) const {
  for (const auto& e : entries_) {
    if (e.label == label) return &e;
  }
  return nullptr;
}

std::string Rb87Catalog::export_csv() const {
  std::ostringstream os;
  os.precision(10);
  os << "label,line,g,s,e1,e2,mu_1g,mu_1s,mu_2g,mu_2s,delta_e_MHz,gamma_MHz\n";
  for (const auto& e : entries_) {
    os << e.label << ',' << e.line << ',' << e.ground_g << ',' << e.ground_s << ','
       << e.excited_1 << ',' << e.excited_2 << ',' << e.raw_1g * e.line_factor << ','
       << e.raw_1s * e.line_factor << ',' << e.raw_2g * e.line_factor << ','
       << e.raw_2s * e.line_factor << ',' << units::to_mhz(e.delta_e) << ','
       << units::to_mhz(e.gamma) << '\n';
  }
  return os.str();
}

LevelScheme lookup_scheme(std::string_view label, double d, double delta_g, double delta_s) {
  const auto& cat = Rb87Catalog::instance();
  const CatalogEntry* e = cat.find(label);
  if (!e) {
    std::string msg = "unknown scheme '" + std::string(label) + "'; valid labels:";
    for (const auto& l : cat.labels()) msg += " " + l;
    throw Error(ErrorCode::catalog, msg);
  }
  if (!(d >= 0.0)) throw Error(ErrorCode::parameter, "optical depth d must be >= 0");
  LevelScheme s;
  s.label = e->label;
  s.mu_1g = e->raw_1g * e->line_factor;
  s.mu_1s = e->raw_1s * e->line_factor;
  s.mu_2g = e->raw_2g * e->line_factor;
  s.mu_2s = e->raw_2s * e->line_factor;
  s.gamma = e->gamma;
  s.delta_e = e->delta_e;
  s.delta_g = delta_g;
  s.delta_s = delta_s;
  s.d = d;
  s.validate();
  return s;
}

double rabi_to_peak_power(double omega_m, double waist_m) {
  if (!(omega_m >= 0.0) || !(waist_m > 0.0)) {
    throw Error(ErrorCode::domain, "peak power needs omega_m >= 0 and waist > 0");
  }
  return kPowerConstant * waist_m * waist_m * omega_m * omega_m;
}

double pulse_energy(const ControlPulse& pulse, const SimGrid& grid, double waist_m) {
  if (!(waist_m > 0.0)) throw Error(ErrorCode::domain, "pulse energy needs waist > 0");
  if (pulse.size() != grid.n_t()) {
    throw Error(ErrorCode::grid_mismatch, "pulse does not match the time grid");
  }
  std::vector<double> sq(pulse.size());
  for (std::size_t m = 0; m < sq.size(); ++m) sq[m] = pulse[m] * pulse[m];
  // grid time is in ns
  return kPowerConstant * waist_m * waist_m * time_integral(sq, grid) * 1e-9;
}

}  // namespace qdmem
