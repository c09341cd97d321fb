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

#include "qdmem/dynamics.hpp"

namespace qdmem {

/// Efficiencies of a fixed control as the photon carrier is detuned.
struct DetuningScan {
  std::vector<double> detunings;  // delta_g, rad/ns, increasing
  std::vector<double> eta_s;
  std::vector<double> eta_tot;
  std::vector<std::string> errors;  // empty string for points that solved
  double delta_s = 0.0;
};

/// Solves storage + retrieval once per delta_g, keeping delta_s and the pulse fixed.
/// Failed points carry NaN efficiencies and an error message.
DetuningScan scan_detuning(const LevelScheme& scheme, const ControlPulse& pulse,
                           const PhotonWaveform& photon, const SimGrid& grid,
                           const std::vector<double>& detunings, int workers = 1);

/// Scan nodes on [-limit, limit], clustered near zero (sinh map), odd count.
std::vector<double> clustered_detunings(double limit, std::size_t count, double core_width);

/// Recommended half-width of the scan: max(50/T1, 20 dw_add).
double wandering_scan_limit(double T1, double delta_omega_add);

struct WanderingResult {
  double delta_omega_add = 0.0;  // FWHM, rad/ns
  double eta_s = 0.0;
  double eta_tot = 0.0;
  double kernel_mass = 1.0;       // quadrature mass of the kernel + analytic tail
  double truncation_bound = 0.0;  // Lorentzian mass outside the scan x max edge efficiency
  std::string warning;
};

/// Lorentzian average of a detuning scan (FWHM delta_omega_add, centred at 0).
/// Efficiencies beyond the scan are taken as zero.
WanderingResult wandering_average(const DetuningScan& scan, double delta_omega_add);

struct DephasingEnsemble {
  double D_phi = 0.0;  // rad^2/ns
  int n_traj = 0;
  std::uint64_t seed = 0;
  double eta_s_mean = 0.0, eta_s_std = 0.0;
  double eta_tot_mean = 0.0, eta_tot_std = 0.0;
  std::vector<double> eta_s, eta_tot;  // per trajectory, in trajectory order
};

/// Wiener phase track phi(tau_m) with phi(0) = 0 and N(0, D_phi dt) increments.
/// Trajectory k of a given seed is the same regardless of how many workers run.
std::vector<double> phase_trajectory(double D_phi, const SimGrid& grid, std::uint64_t seed,
                                     std::uint64_t trajectory);

/// Monte Carlo over phase-noisy sharp-exponential photons of lifetime T1.
DephasingEnsemble dephasing_monte_carlo(const LevelScheme& scheme, const ControlPulse& pulse,
                                        const SimGrid& grid, double T1, double D_phi,
                                        int n_traj, std::uint64_t seed, int workers = 1);

/// Ensemble mean of [phi(tau) - phi(0)]^2 per time node.
std::vector<double> phase_msd(double D_phi, const SimGrid& grid, int n_traj, std::uint64_t seed);

/// Runs f(i) for i in [0, n) on up to `workers` threads.
template <class F>
void parallel_for(std::size_t n, int workers, F&& f);

}  // namespace qdmem

#include "qdmem/detail/parallel.hpp"
