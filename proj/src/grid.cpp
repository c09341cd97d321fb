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
#include "qdmem/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qdmem/errors.hpp"

namespace qdmem {

SimGrid::SimGrid(std::size_t n_z, std::size_t n_t, double T) : n_z_(n_z), n_t_(n_t), T_(T) {
  if (n_z < 2 || n_t < 2) throw Error(ErrorCode::parameter, "grid needs n_z >= 2 and n_t >= 2");
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorCode::parameter, "grid needs T > 0");
}

double grid_norm(std::span<const cplx> f, const SimGrid& grid) {
  if (f.size() != grid.n_t()) throw Error(ErrorCode::grid_mismatch, "series does not match the time grid");
  double s = 0.0;
  for (std::size_t m = 0; m < f.size(); ++m) s += grid.t_weight(m) * std::norm(f[m]);
  return s;
}

double time_integral(std::span<const double> f, const SimGrid& grid) {
  if (f.size() != grid.n_t()) throw Error(ErrorCode::grid_mismatch, "series does not match the time grid");
  double s = 0.0;
  for (std::size_t m = 0; m < f.size(); ++m) s += grid.t_weight(m) * f[m];
  return s;
}

double z_norm(std::span<const cplx> f, const SimGrid& grid) {
  if (f.size() != grid.n_z()) throw Error(ErrorCode::grid_mismatch, "profile does not match the z grid");
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += grid.z_weight(j) * std::norm(f[j]);
  return s;
}

std::string to_string(WaveformKind kind) {
  switch (kind) {
    case WaveformKind::sharp_exponential: return "sharp-exponential";
    case WaveformKind::loaded_exponential: return "loaded-exponential";
    case WaveformKind::phase_noisy: return "phase-noisy";
  }
  return "?";
}

WaveformKind waveform_kind_from_string(const std::string& name) {
  if (name == "sharp-exponential" || name == "sharp") return WaveformKind::sharp_exponential;
  if (name == "loaded-exponential" || name == "loaded") return WaveformKind::loaded_exponential;
  if (name == "phase-noisy") return WaveformKind::phase_noisy;
  throw Error(ErrorCode::invalid_argument,
              "unknown waveform '" + name +
                  "' (expected sharp-exponential, loaded-exponential or phase-noisy)");
}

void renormalize(std::vector<cplx>& samples, const SimGrid& grid) {
  const double n = grid_norm(samples, grid);
  if (!(n > 0.0)) throw Error(ErrorCode::parameter, "waveform has zero norm on this grid");
  const double s = 1.0 / std::sqrt(n);
  for (auto& v : samples) v *= s;
}

double loaded_peak_time(double T1, double T_L) {
  return std::log(T1 / T_L) * T1 * T_L / (T1 - T_L);
}

PhotonWaveform make_waveform(WaveformKind kind, double T1, double T_L, const SimGrid& grid,
                             std::optional<std::vector<double>> phase_track) {
  if (!(T1 > 0.0)) throw Error(ErrorCode::parameter, "photon lifetime T1 must be > 0");
  PhotonWaveform w;
  w.kind = kind;
  w.T1 = T1;
  w.samples.resize(grid.n_t());
  if (kind == WaveformKind::loaded_exponential) {
    if (!(T_L > 0.0) || !(T_L < T1)) {
      throw Error(ErrorCode::parameter, "loaded waveform needs 0 < T_L < T1");
    }
    w.T_L = T_L;
    for (std::size_t m = 0; m < grid.n_t(); ++m) {
      const double t = grid.tau(m);
      const double v = (std::exp(-t / T1) - std::exp(-t / T_L)) / (T1 - T_L);
      w.samples[m] = std::sqrt(std::max(v, 0.0));
    }
  } else {
    for (std::size_t m = 0; m < grid.n_t(); ++m) {
      w.samples[m] = std::exp(-grid.tau(m) / (2.0 * T1)) / std::sqrt(T1);
    }
  }
  if (kind == WaveformKind::phase_noisy) {
    if (!phase_track || phase_track->size() != grid.n_t()) {
      throw Error(ErrorCode::grid_mismatch, "phase-noisy waveform needs one phase per time node");
    }
    w.phase_track = std::move(*phase_track);
    for (std::size_t m = 0; m < grid.n_t(); ++m) {
      w.samples[m] *= std::polar(1.0, -w.phase_track[m]);
    }
  }
  renormalize(w.samples, grid);
  return w;
}

ControlPulse::ControlPulse(std::vector<double> samples) : samples_(std::move(samples)) {}

ControlPulse ControlPulse::zero(const SimGrid& grid) {
  return ControlPulse(std::vector<double>(grid.n_t(), 0.0));
}

ControlPulse ControlPulse::gaussian(const SimGrid& grid, double center, double width,
                                    double amplitude) {
  std::vector<double> v(grid.n_t());
  for (std::size_t m = 0; m < v.size(); ++m) {
    const double x = (grid.tau(m) - center) / width;
    v[m] = amplitude * std::exp(-0.5 * x * x);
  }
  return ControlPulse(std::move(v));
}

double ControlPulse::omega_m() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

bool ControlPulse::finite() const {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

FieldState::FieldState(std::size_t nz, std::size_t nt, Direction dir, bool with_p2)
    : n_z(nz), n_t(nt), direction(dir), E(nz * nt), P1(nz * nt), S(nz * nt) {
  if (with_p2) P2.assign(nz * nt, cplx{});
}

std::vector<cplx> FieldState::time_slice(const std::vector<cplx>& field, std::size_t j) const {
  std::vector<cplx> out(n_t);
  for (std::size_t m = 0; m < n_t; ++m) out[m] = field[index(j, m)];
  return out;
}

std::vector<cplx> FieldState::z_slice(const std::vector<cplx>& field, std::size_t m) const {
  return std::vector<cplx>(field.begin() + m * n_z, field.begin() + (m + 1) * n_z);
}

std::string real_series_csv(std::span<const double> values, const SimGrid& grid,
                            const std::string& value_name) {
  std::ostringstream os;
  os.precision(12);
  os << "tau_ns," << value_name << '\n';
  for (std::size_t m = 0; m < values.size(); ++m) os << grid.tau(m) << ',' << values[m] << '\n';
  return os.str();
}

std::string complex_series_csv(std::span<const cplx> values, const SimGrid& grid) {
  std::ostringstream os;
  os.precision(12);
  os << "tau_ns,re,im\n";
  for (std::size_t m = 0; m < values.size(); ++m) {
    os << grid.tau(m) << ',' << values[m].real() << ',' << values[m].imag() << '\n';
  }
  return os.str();
}

std::string complex_z_series_csv(std::span<const cplx> values, const SimGrid& grid) {
  std::ostringstream os;
  os.precision(12);
  os << "z,re,im\n";
  for (std::size_t j = 0; j < values.size(); ++j) {
    os << static_cast<double>(j) * grid.dz() << ',' << values[j].real() << ','
       << values[j].imag() << '\n';
  }
  return os.str();
}

ControlPulse parse_pulse_csv(const std::string& text, const SimGrid& grid) {
  std::vector<double> ts, vs;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double t, v;
    if (!(ls >> t >> v)) continue;  // header or junk
    if (!ts.empty() && !(t > ts.back())) {
      throw Error(ErrorCode::invalid_argument, "pulse CSV times must be strictly increasing");
    }
    ts.push_back(t);
    vs.push_back(v);
  }
  if (ts.empty()) throw Error(ErrorCode::invalid_argument, "pulse CSV has no data rows");
  std::vector<double> out(grid.n_t(), 0.0);
  for (std::size_t m = 0; m < out.size(); ++m) {
    const double t = grid.tau(m);
    if (ts.size() == 1) {
      out[m] = (std::abs(t - ts[0]) < 1e-12) ? vs[0] : 0.0;
      continue;
    }
    // tolerate round-off at the ends of the file's range
    const double tol = 1e-9 * std::max(1.0, std::abs(ts.back()));
    if (t < ts.front() - tol || t > ts.back() + tol) continue;
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t i = (it == ts.begin()) ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
    if (i + 1 >= ts.size()) i = ts.size() - 2;
    const double f = std::clamp((t - ts[i]) / (ts[i + 1] - ts[i]), 0.0, 1.0);
    out[m] = vs[i] + f * (vs[i + 1] - vs[i]);
  }
  ControlPulse p(std::move(out));
  if (!p.finite()) throw Error(ErrorCode::invalid_argument, "pulse CSV contains non-finite values");
  return p;
}

ControlPulse read_pulse_csv(const std::string& path, const SimGrid& grid) {
  return parse_pulse_csv(read_text_file(path), grid);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw Error(ErrorCode::io, "write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace qdmem
