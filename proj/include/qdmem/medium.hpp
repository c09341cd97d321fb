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

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qdmem {

class ControlPulse;
class SimGrid;

namespace units {
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
/// Angular frequency in rad/ns for a cyclic frequency given in MHz.
constexpr double mhz(double f_mhz) { return kTwoPi * f_mhz * 1e-3; }
/// Cyclic frequency in MHz for an angular frequency in rad/ns.
constexpr double to_mhz(double w_rad_per_ns) { return w_rad_per_ns / (kTwoPi * 1e-3); }
}  // namespace units

/// Atomic level configuration. Frequencies are angular, in rad/ns.
struct LevelScheme {
  std::string label;
  double mu_1g = 1.0;
  double mu_1s = 1.0;
  double mu_2g = 0.0;
  double mu_2s = 0.0;
  double gamma = units::mhz(3.035);
  double delta_e = 0.0;  // energy of |2> above |1>
  double delta_g = 0.0;
  double delta_s = 0.0;
  double d = 0.0;  // optical depth, half of the usual d_std
  double delta_hf = units::mhz(6835.0);

  /// True when the second excited state does not couple.
  bool three_level() const { return mu_2g == 0.0 && mu_2s == 0.0; }
  /// Throws qdmem::Error(parameter) when an invariant is violated.
  void validate() const;
};

/// Catalog row: a named scheme together with its level assignment.
struct CatalogEntry {
  std::string label;
  std::string line;     // "D2", "D1" or "ideal"
  std::string ground_g;  // e.g. "|1,-1>"
  std::string ground_s;
  std::string excited_1;  // e.g. "|1',0>"
  std::string excited_2;  // empty for three-level entries
  // Moments in units of the line's own reduced matrix element, before the
  // D1 -> cycling-transition factor is applied.
  double raw_1g, raw_1s, raw_2g, raw_2s;
  double line_factor;  // 1 for D2 and ideal entries, 1/sqrt(2) for D1
  double delta_e;       // rad/ns, signed
  double gamma;         // rad/ns
};

/// Reduced-moment ratio <J=1/2||er||J'=1/2> / <J=1/2||er||J'=3/2>.
inline constexpr double kD1Factor = 0.70710678118654752440;

/// Compiled-in 87Rb table plus the idealized scenarios.
class Rb87Catalog {
 public:
  static const Rb87Catalog& instance();

  std::span<const CatalogEntry> entries() const { return entries_; }
  std::vector<std::string> labels() const;
  const CatalogEntry* find(std::string_view label) const;

  /// Emits every entry as CSV with the documented column layout.
  std::string export_csv() const;

 private:
  Rb87Catalog();
  std::vector<CatalogEntry> entries_;
};

/// Builds a fully populated scheme for a catalog label.
/// Throws Error(catalog) listing valid labels when the label is unknown.
LevelScheme lookup_scheme(std::string_view label, double d, double delta_g = 0.0,
                          double delta_s = 0.0);

/// 52.47 W m^-2: peak power per (waist^2 (Omega/gamma)^2) on the D2 cycling line.
inline constexpr double kPowerConstant = 52.47;

/// Peak power in W for a Rabi amplitude in units of gamma and a 1/e^2 waist in m.
double rabi_to_peak_power(double omega_m, double waist_m);

/// Pulse energy in J; the pulse is in units of gamma on a time grid in ns.
double pulse_energy(const ControlPulse& pulse, const SimGrid& grid, double waist_m);

}  // namespace qdmem
