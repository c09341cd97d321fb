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

#include <optional>
#include <span>
#include <vector>

#include "qdmem/grid.hpp"
#include "qdmem/medium.hpp"

namespace qdmem {

/// Efficiencies and energy-balance terms of one storage + backward-retrieval run.
struct EfficiencyReport {
  double eta_s = 0.0;
  std::optional<double> eta_r;  // empty when eta_s < 1e-12
  double eta_tot = 0.0;
  double leak = 0.0;          // int |E(1,tau)|^2 dtau
  double decay_loss = 0.0;    // 2 gamma int int (|P1|^2 + |P2|^2)
  double residual_pol = 0.0;  // int (|P1|^2 + |P2|^2)(z,T) dz
  double balance_defect = 0.0;
};

/// Atomic fields of a forward solve, kept for gradient accumulation.
struct AtomicTrack {
  std::size_t n_z = 0;
  std::size_t n_t = 0;
  bool with_p2 = false;
  std::vector<cplx> P1, P2, S;  // time-major, like FieldState
};

/// Optional four-wave-mixing terms (three-level reduction only).
struct FwmTerms {
  double delta_hf = 0.0;  // rad/ns
};

struct ForwardOutput {
  std::vector<cplx> spin_wave;  // S(z, T)
  double eta_s = 0.0;
  double input_norm = 0.0;
  double leak = 0.0;
  double decay_loss = 0.0;
  double residual_pol = 0.0;
  std::optional<FieldState> fields;
  std::optional<AtomicTrack> track;
  std::optional<std::vector<cplx>> stokes;  // E'(z, tau), FWM runs only
  double fwm_drive_sq = 0.0;     // sum of |FWM drive|^2 over the mesh
  double normal_drive_sq = 0.0;  // sum of |mu_1s Omega P1|^2 over the mesh
};

struct AdjointOutput {
  std::vector<cplx> output;  // E_out(tau) = adjoint E at z = 0
  std::optional<FieldState> fields;
  /// d/dOmega(tau) of 2 Re <terminal, S_T(track input)>, as a density in
  /// tau with Omega in rad/ns. Present only when a track was supplied.
  std::optional<std::vector<double>> gradient;
};

/// Second-order box scheme for the Maxwell-Bloch storage equations and its
/// exact discrete transpose. The transpose doubles as the backward-retrieval
/// solver and yields the functional gradient of quadratic objectives.
///
/// Time stepping is trapezoidal in tau for (P1, P2, S) and trapezoidal in z
/// for E, coupled implicitly at every node. With mu_2g = mu_2s = 0 the
/// four-level path reduces to the dedicated three-level path bit for bit.
class Propagator {
 public:
  Propagator(const LevelScheme& scheme, const ControlPulse& pulse, const SimGrid& grid,
             std::optional<FwmTerms> fwm = std::nullopt);

  struct ForwardRequest {
    bool keep_fields = false;
    bool keep_track = false;
  };
  ForwardOutput forward(std::span<const cplx> input, ForwardRequest req) const;

  /// Integrates the adjoint system from S_bar(z, T) = terminal.
  AdjointOutput adjoint(std::span<const cplx> terminal, const AtomicTrack* track,
                        bool keep_fields) const;

  const SimGrid& grid() const { return grid_; }
  const LevelScheme& scheme() const { return scheme_; }
  bool uses_p2() const { return use_p2_; }

  /// Forces the four-level code path even when mu_2g = mu_2s = 0.
  void force_four_level(bool on) { use_p2_ = on || !scheme_.three_level(); }

 private:
  template <bool kTwo, bool kFwm>
  ForwardOutput forward_impl(std::span<const cplx> input, ForwardRequest req) const;
  template <bool kTwo, bool kFwm>
  AdjointOutput adjoint_impl(std::span<const cplx> terminal, const AtomicTrack* track,
                             bool keep_fields) const;

  LevelScheme scheme_;
  SimGrid grid_;
  std::vector<double> omega_;  // rad/ns
  std::optional<FwmTerms> fwm_;
  bool use_p2_;
};

/// Forward storage solve with full field output.
FieldState solve_storage(const LevelScheme& scheme, const ControlPulse& pulse,
                         const PhotonWaveform& photon, const SimGrid& grid);

/// Backward-retrieval (adjoint) solve from a stored spin wave S(z, T).
/// Throws Error(undefined_ratio) when the spin wave is identically zero.
FieldState solve_adjoint(const LevelScheme& scheme, const ControlPulse& pulse,
                         std::span<const cplx> spin_wave, const SimGrid& grid);

/// Efficiencies from a forward/adjoint pair. decay_loss needs the scheme's gamma.
EfficiencyReport compute_efficiencies(const LevelScheme& scheme, const FieldState& forward,
                                      const FieldState& adjoint, const SimGrid& grid,
                                      const PhotonWaveform& photon);

/// |leak + residual + decay - input norm| for a forward solution.
double energy_balance(const LevelScheme& scheme, const FieldState& forward,
                      const SimGrid& grid, const PhotonWaveform& photon);

/// Storage followed by backward retrieval without keeping fields.
EfficiencyReport evaluate(const LevelScheme& scheme, const ControlPulse& pulse,
                          const PhotonWaveform& photon, const SimGrid& grid);

struct FwmSolution {
  FieldState fields;
  std::vector<cplx> stokes;  // E'(z, tau), time-major
  EfficiencyReport report;
  double drive_ratio = 0.0;  // rms |FWM drive| / rms |mu_1s Omega P1|
};

/// Stokes-extended three-level solve with light shifts; includes retrieval.
/// Throws Error(parameter) for delta_hf <= 0 or a four-level scheme.
FwmSolution solve_storage_fwm(const LevelScheme& scheme, const ControlPulse& pulse,
                              const PhotonWaveform& photon, const SimGrid& grid);

/// Reference scale d gamma^2 / Delta_HF^2.
double fwm_ratio_estimate(const LevelScheme& scheme);

}  // namespace qdmem
