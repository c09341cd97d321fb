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
#include <string>
#include <vector>

#include "qdmem/dynamics.hpp"
#include "qdmem/errors.hpp"

namespace qdmem {

/// Quantity maximized by the ascent.
enum class Objective { total, storage };

/// Search direction: the raw gradient, or Polak-Ribiere conjugate directions
/// built from the same gradients (restarted whenever they stop ascending).
enum class SearchRule { steepest, conjugate };

std::string to_string(Objective o);
Objective objective_from_string(const std::string& name);
std::string to_string(SearchRule r);
SearchRule search_rule_from_string(const std::string& name);

/// Gradient-ascent settings. The pulse is stored in units of gamma and the
/// step uses the gradient with respect to Omega/gamma (a density per ns), so
/// the update reads Omega/gamma += lambda * gradient.
struct AscentConfig {
  double lambda_init = 1000.0;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  double shrink = 0.5;
  int max_halvings = 40;
  double tol_rel = 1e-3;
  int history = 3;
  int max_iters = 3000;
  Objective objective = Objective::storage;
  /// Apply the stopping rule to eta_tot even when ascending eta_s.
  bool stop_on_total = true;
  SearchRule search = SearchRule::steepest;
  double time_budget_s = 0.0;  // 0 = unlimited
  /// Correlation length (ns) of the H1 metric used to turn the L2 gradient
  /// into a search direction; 0 keeps the plain L2 gradient.
  double smoothing_ns = 0.0;

  void validate() const;
};

struct TraceEntry {
  int iter = 0;
  double eta_s = 0.0;
  double eta_tot = 0.0;
  double lambda = 0.0;
  double grad_norm = 0.0;
  int halvings = 0;
  bool curvature_ok = true;
};

struct OptimizationResult {
  ControlPulse pulse;
  ControlPulse init_pulse;
  EfficiencyReport report;
  std::vector<TraceEntry> trace;  // entry 0 is the initial pulse
  bool converged = false;
  std::string stop_reason;
  double omega_m = 0.0;
  std::vector<std::string> warnings;
  int start_index = 0;                  // which trial pulse won (ascend_multi)
  std::vector<double> start_eta_tot;    // final eta_tot per trial pulse
};

/// Thrown when no step length passes the sufficient-increase test.
class StagnationError : public Error {
 public:
  explicit StagnationError(OptimizationResult partial)
      : Error(ErrorCode::stagnation, "line search exhausted its backoff budget"),
        partial_(std::move(partial)) {}
  const OptimizationResult& partial() const noexcept { return partial_; }

 private:
  OptimizationResult partial_;
};

/// Objective value and its exact gradient for the discretized system.
struct ObjectiveEval {
  double value = 0.0;
  double eta_s = 0.0;
  double eta_tot = 0.0;
  std::vector<double> gradient;  // density in tau, per unit Omega (rad/ns)
};

ObjectiveEval evaluate_objective(const LevelScheme& scheme, const ControlPulse& pulse,
                                 const PhotonWaveform& photon, const SimGrid& grid,
                                 Objective objective);

/// -2 int dz Im[Sbar^* (mu_1s P1 + mu_2s P2) - (mu_1s P1bar + mu_2s P2bar) S^*]
/// evaluated per tau node with the trapezoidal rule in z. This is the
/// gradient of eta_s when the adjoint was started from S(z, T).
std::vector<double> functional_gradient(const FieldState& forward, const FieldState& adjoint,
                                        const LevelScheme& scheme, const SimGrid& grid);

/// Default trial pulse: Gaussian of width T1 centred in the window, 10 gamma high.
ControlPulse default_initial_pulse(const SimGrid& grid, double T1);

/// Default trial centres: the window midpoint and 2 T1 (deduplicated).
std::vector<double> default_initial_centers(const SimGrid& grid, double T1);

OptimizationResult ascend(const LevelScheme& scheme, const PhotonWaveform& photon,
                          const SimGrid& grid, const ControlPulse& init_pulse,
                          const AscentConfig& cfg);

/// Ascends from every trial pulse in turn and keeps the result with the
/// largest eta_tot (earliest start wins ties). Starts that stagnate take part
/// with converged = false instead of throwing.
OptimizationResult ascend_multi(const LevelScheme& scheme, const PhotonWaveform& photon,
                                const SimGrid& grid, const std::vector<ControlPulse>& inits,
                                const AscentConfig& cfg);

/// Plain storage + retrieval under a pulse optimized for another scheme.
EfficiencyReport cross_evaluate(const OptimizationResult& from, const LevelScheme& scheme_to,
                                const PhotonWaveform& photon, const SimGrid& grid);

/// Trapezoidal inner product of two real functions of tau.
double tau_dot(const std::vector<double>& a, const std::vector<double>& b, const SimGrid& grid);

}  // namespace qdmem
