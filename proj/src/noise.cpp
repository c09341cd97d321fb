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
#include "qdmem/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qdmem/errors.hpp"

namespace qdmem {

DetuningScan scan_detuning(const LevelScheme& scheme, const ControlPulse& pulse,
                           const PhotonWaveform& photon, const SimGrid& grid,
                           const std::vector<double>& detunings, int workers) {
  if (detunings.empty()) throw Error(ErrorCode::invalid_argument, "empty detuning list");
  for (std::size_t i = 1; i < detunings.size(); ++i) {
    if (!(detunings[i] > detunings[i - 1])) {
      throw Error(ErrorCode::invalid_argument, "detunings must be strictly increasing");
    }
  }
  DetuningScan scan;
  scan.detunings = detunings;
  scan.delta_s = scheme.delta_s;
  const std::size_t n = detunings.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  scan.eta_s.assign(n, nan);
  scan.eta_tot.assign(n, nan);
  scan.errors.assign(n, "");
  parallel_for(n, workers, [&](std::size_t i) {
    LevelScheme s = scheme;
    s.delta_g = detunings[i];
    try {
      const auto r = evaluate(s, pulse, photon, grid);
      scan.eta_s[i] = r.eta_s;
      scan.eta_tot[i] = r.eta_tot;
    } catch (const std::exception& e) {
      scan.errors[i] = e.what();
    }
  });
  return scan;
}

std::vector<double> clustered_detunings(double limit, std::size_t count, double core_width) {
  if (!(limit > 0.0) || count < 3) {
    throw Error(ErrorCode::invalid_argument, "scan needs limit > 0 and at least 3 nodes");
  }
  if (count % 2 == 0) ++count;
  // delta(u) = c sinh(a u) with c sinh(a) = limit; c sets the spacing near zero.
  const double c = std::min(core_width, limit);
  const double a = std::asinh(limit / c);
  std::vector<double> out(count);
  const std::size_t half = count / 2;
  for (std::size_t i = 0; i < count; ++i) {
    const double u = (static_cast<double>(i) - static_cast<double>(half)) / static_cast<double>(half);
    out[i] = c * std::sinh(a * u);
  }
  out[half] = 0.0;
  return out;
}

double wandering_scan_limit(double T1, double delta_omega_add) {
  return std::max(50.0 / T1, 20.0 * delta_omega_add);
}

namespace {

// Integrals of the unit Lorentzian with half width b on [x0, x1]:
// zeroth moment and first moment.
double lorentz_mass(double b, double x0, double x1) {
  return (std::atan(x1 / b) - std::atan(x0 / b)) / units::kPi;
}
double lorentz_first(double b, double x0, double x1) {
  return b / (2.0 * units::kPi) * std::log((x1 * x1 + b * b) / (x0 * x0 + b * b));
}

}  // namespace

WanderingResult wandering_average(const DetuningScan& scan, double delta_omega_add) {
  if (!(delta_omega_add >= 0.0)) {
    throw Error(ErrorCode::domain, "spectral wandering width must be >= 0");
  }
  const auto& x = scan.detunings;
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorCode::invalid_argument, "scan needs at least two points");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(scan.eta_s[i]) || !std::isfinite(scan.eta_tot[i])) {
      throw Error(ErrorCode::invalid_argument, "scan contains failed points");
    }
  }
  WanderingResult r;
  r.delta_omega_add = delta_omega_add;
  if (delta_omega_add == 0.0) {
    if (x.front() > 0.0 || x.back() < 0.0) {
      throw Error(ErrorCode::domain, "scan does not contain zero detuning");
    }
    auto it = std::lower_bound(x.begin(), x.end(), 0.0);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    if (x[i] == 0.0) {
      r.eta_s = scan.eta_s[i];
      r.eta_tot = scan.eta_tot[i];
    } else {
      const double f = -x[i - 1] / (x[i] - x[i - 1]);
      r.eta_s = scan.eta_s[i - 1] + f * (scan.eta_s[i] - scan.eta_s[i - 1]);
      r.eta_tot = scan.eta_tot[i - 1] + f * (scan.eta_tot[i] - scan.eta_tot[i - 1]);
    }
    return r;
  }
  // Product integration: efficiencies linear between nodes, kernel exact.
  const double b = 0.5 * delta_omega_add;
  double mass = 0.0, s = 0.0, t = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double x0 = x[i], x1 = x[i + 1], h = x1 - x0;
    const double m0 = lorentz_mass(b, x0, x1);
    const double m1 = lorentz_first(b, x0, x1) - x0 * m0;  // int (x - x0) P
    mass += m0;
    const double ws1 = m1 / h, ws0 = m0 - ws1;
    s += ws0 * scan.eta_s[i] + ws1 * scan.eta_s[i + 1];
    t += ws0 * scan.eta_tot[i] + ws1 * scan.eta_tot[i + 1];
  }
  const double tail = 1.0 - mass;
  r.eta_s = s;
  r.eta_tot = t;
  r.kernel_mass = mass + tail;
  const double edge = std::max({scan.eta_s.front(), scan.eta_s.back(), scan.eta_tot.front(),
                                scan.eta_tot.back()});
  r.truncation_bound = tail * std::max(edge, 0.0);
  if (r.truncation_bound > 1e-3 * std::min(r.eta_s, r.eta_tot)) {
    r.warning = "detuning scan too narrow for this width; truncation bound " +
                std::to_string(r.truncation_bound) + ", kernel mass outside scan " +
                std::to_string(tail);
  }
  return r;
}

std::vector<double> phase_trajectory(double D_phi, const SimGrid& grid, std::uint64_t seed,
                                     std::uint64_t trajectory) {
  if (!(D_phi >= 0.0)) throw Error(ErrorCode::domain, "D_phi must be >= 0");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trajectory),
                    static_cast<std::uint32_t>(trajectory >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(D_phi * grid.dt());
  std::vector<double> phi(grid.n_t(), 0.0);
  for (std::size_t m = 1; m < phi.size(); ++m) phi[m] = phi[m - 1] + sd * normal(rng);
  return phi;
}

namespace {

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
}

}  // namespace

DephasingEnsemble dephasing_monte_carlo(const LevelScheme& scheme, const ControlPulse& pulse,
                                        const SimGrid& grid, double T1, double D_phi,
                                        int n_traj, std::uint64_t seed, int workers) {
  if (!(D_phi >= 0.0)) throw Error(ErrorCode::domain, "D_phi must be >= 0");
  if (n_traj < 1) throw Error(ErrorCode::invalid_argument, "n_traj must be >= 1");
  DephasingEnsemble ens;
  ens.D_phi = D_phi;
  ens.n_traj = n_traj;
  ens.seed = seed;
  ens.eta_s.assign(n_traj, 0.0);
  ens.eta_tot.assign(n_traj, 0.0);
  Propagator prop(scheme, pulse, grid);
  parallel_for(static_cast<std::size_t>(n_traj), workers, [&](std::size_t k) {
    auto phi = phase_trajectory(D_phi, grid, seed, k);
    auto photon = make_waveform(WaveformKind::phase_noisy, T1, 0.0, grid, std::move(phi));
    auto fwd = prop.forward(photon.samples, {});
    double eta_tot = 0.0;
    if (fwd.eta_s > 0.0) eta_tot = grid_norm(prop.adjoint(fwd.spin_wave, nullptr, false).output, grid);
    ens.eta_s[k] = fwd.eta_s;
    ens.eta_tot[k] = eta_tot;
  });
  mean_std(ens.eta_s, ens.eta_s_mean, ens.eta_s_std);
  mean_std(ens.eta_tot, ens.eta_tot_mean, ens.eta_tot_std);
  return ens;
}

std::vector<double> phase_msd(double D_phi, const SimGrid& grid, int n_traj, std::uint64_t seed) {
  std::vector<double> msd(grid.n_t(), 0.0);
  for (int k = 0; k < n_traj; ++k) {
    auto phi = phase_trajectory(D_phi, grid, seed, static_cast<std::uint64_t>(k));
    for (std::size_t m = 0; m < msd.size(); ++m) msd[m] += phi[m] * phi[m];
  }
  for (auto& v : msd) v /= n_traj;
  return msd;
}

}  // namespace qdmem
