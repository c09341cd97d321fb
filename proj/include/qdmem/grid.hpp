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

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qdmem {

using cplx = std::complex<double>;

/// Uniform (z, tau) mesh: z in [0, 1] (dimensionless), tau in [0, T] ns.
class SimGrid {
 public:
  SimGrid(std::size_t n_z, std::size_t n_t, double T);

  std::size_t n_z() const { return n_z_; }
  std::size_t n_t() const { return n_t_; }
  double T() const { return T_; }
  double dz() const { return 1.0 / static_cast<double>(n_z_ - 1); }
  double dt() const { return T_ / static_cast<double>(n_t_ - 1); }
  double tau(std::size_t m) const { return static_cast<double>(m) * dt(); }

  /// Trapezoidal quadrature weights.
  double t_weight(std::size_t m) const {
    return (m == 0 || m + 1 == n_t_) ? 0.5 * dt() : dt();
  }
  double z_weight(std::size_t j) const {
    return (j == 0 || j + 1 == n_z_) ? 0.5 * dz() : dz();
  }

  bool operator==(const SimGrid& o) const {
    return n_z_ == o.n_z_ && n_t_ == o.n_t_ && T_ == o.T_;
  }

 private:
  std::size_t n_z_;
  std::size_t n_t_;
  double T_;
};

/// Trapezoidal sum of |f|^2 over the time axis.
double grid_norm(std::span<const cplx> f, const SimGrid& grid);
/// Trapezoidal integral of a real function over the time axis.
double time_integral(std::span<const double> f, const SimGrid& grid);
/// Trapezoidal sum of |f|^2 over the z axis.
double z_norm(std::span<const cplx> f, const SimGrid& grid);

enum class WaveformKind { sharp_exponential, loaded_exponential, phase_noisy };

std::string to_string(WaveformKind kind);
WaveformKind waveform_kind_from_string(const std::string& name);

/// Normalized input photon envelope sampled on the time grid.
struct PhotonWaveform {
  WaveformKind kind = WaveformKind::sharp_exponential;
  double T1 = 1.0;
  double T_L = 0.0;
  std::vector<double> phase_track;  // radians, phase_noisy only
  std::vector<cplx> samples;
};

/// Builds a waveform on `grid` and renormalizes it to unit grid norm.
/// The phase-noisy variant multiplies the sharp exponential by exp(-i phi).
PhotonWaveform make_waveform(WaveformKind kind, double T1, double T_L,
                             const SimGrid& grid,
                             std::optional<std::vector<double>> phase_track = {});

/// Rescales samples in place so that grid_norm == 1.
void renormalize(std::vector<cplx>& samples, const SimGrid& grid);

/// Peak of the loaded-exponential envelope.
double loaded_peak_time(double T1, double T_L);

/// Real Rabi envelope in units of gamma, one sample per time node.
class ControlPulse {
 public:
  ControlPulse() = default;
  explicit ControlPulse(std::vector<double> samples);

  static ControlPulse zero(const SimGrid& grid);
  /// exp(-(tau - center)^2 / (2 width^2)) * amplitude
  static ControlPulse gaussian(const SimGrid& grid, double center, double width,
                               double amplitude);

  std::span<const double> samples() const { return samples_; }
  std::vector<double>& mutable_samples() { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t m) const { return samples_[m]; }

  /// Peak Rabi amplitude, max |Omega| over samples (the overall sign is a gauge).
  double omega_m() const;
  bool finite() const;

 private:
  std::vector<double> samples_;
};

enum class Direction { forward, adjoint };

/// Discretized fields on the (z, tau) mesh, stored time-major:
/// value(j, m) lives at index m * n_z + j.
struct FieldState {
  std::size_t n_z = 0;
  std::size_t n_t = 0;
  Direction direction = Direction::forward;
  std::vector<cplx> E, P1, P2, S;  // P2 is empty for three-level runs

  FieldState() = default;
  FieldState(std::size_t nz, std::size_t nt, Direction dir, bool with_p2);

  std::size_t index(std::size_t j, std::size_t m) const { return m * n_z + j; }
  /// Field at fixed z as a function of tau.
  std::vector<cplx> time_slice(const std::vector<cplx>& field, std::size_t j) const;
  /// Field at fixed tau as a function of z.
  std::vector<cplx> z_slice(const std::vector<cplx>& field, std::size_t m) const;
};

// CSV helpers ---------------------------------------------------------------

/// Two columns: tau_ns, value.
std::string real_series_csv(std::span<const double> values, const SimGrid& grid,
                            const std::string& value_name = "value");
/// Three columns: tau_ns, re, im.
std::string complex_series_csv(std::span<const cplx> values, const SimGrid& grid);
/// Three columns along z: z, re, im.
std::string complex_z_series_csv(std::span<const cplx> values, const SimGrid& grid);

/// Parses a (tau_ns, value) CSV and resamples it onto `grid` by linear
/// interpolation (zero outside the file's range). Header lines are skipped.
ControlPulse parse_pulse_csv(const std::string& text, const SimGrid& grid);
ControlPulse read_pulse_csv(const std::string& path, const SimGrid& grid);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace qdmem
