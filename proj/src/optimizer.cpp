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
#include "qdmem/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "qdmem/errors.hpp"

namespace qdmem {

std::string to_string(Objective o) { return o == Objective::total ? "total" : "storage"; }

Objective objective_from_string(const std::string& name) {
  if (name == "total" || name == "eta_tot") return Objective::total;
  if (name == "storage" || name == "eta_s") return Objective::storage;
  throw Error(ErrorCode::invalid_argument, "unknown objective '" + name + "' (total|storage)");
}

std::string to_string(SearchRule r) { return r == SearchRule::steepest ? "steepest" : "conjugate"; }

SearchRule search_rule_from_string(const std::string& name) {
  if (name == "steepest") return SearchRule::steepest;
  if (name == "conjugate") return SearchRule::conjugate;
  throw Error(ErrorCode::invalid_argument, "unknown search rule '" + name + "' (steepest|conjugate)");
}

void AscentConfig::validate() const {
  if (!(lambda_init > 0.0)) throw Error(ErrorCode::parameter, "lambda_init must be > 0");
  if (!(wolfe_c1 > 0.0 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0)) {
    throw Error(ErrorCode::parameter, "Wolfe constants need 0 < c1 < c2 < 1");
  }
  if (!(shrink > 0.0 && shrink < 1.0)) throw Error(ErrorCode::parameter, "shrink must be in (0,1)");
  if (!(tol_rel > 0.0)) throw Error(ErrorCode::parameter, "tol_rel must be > 0");
  if (history < 1) throw Error(ErrorCode::parameter, "history must be >= 1");
  if (max_iters < 1) throw Error(ErrorCode::parameter, "max_iters must be >= 1");
  if (max_halvings < 1) throw Error(ErrorCode::parameter, "max_halvings must be >= 1");
}

double tau_dot(const std::vector<double>& a, const std::vector<double>& b, const SimGrid& grid) {
  if (a.size() != grid.n_t() || b.size() != grid.n_t()) {
    throw Error(ErrorCode::grid_mismatch, "series does not match the time grid");
  }
  double s = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) s += grid.t_weight(m) * a[m] * b[m];
  return s;
}

namespace {

void add_into(std::vector<double>& acc, const std::vector<double>& g) {
  for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += g[m];
}

// Value only: one storage and one retrieval solve.
std::pair<double, double> objective_value(const Propagator& prop, const PhotonWaveform& photon,
                                          Objective objective) {
  auto fwd = prop.forward(photon.samples, {});
  if (objective == Objective::storage) return {fwd.eta_s, 0.0};
  double eta_tot = 0.0;
  if (fwd.eta_s > 0.0) {
    auto adj = prop.adjoint(fwd.spin_wave, nullptr, false);
    eta_tot = grid_norm(adj.output, prop.grid());
  }
  return {fwd.eta_s, eta_tot};
}

// Solves (1 - l^2 d^2/dtau^2) out = g with zero-flux ends (Thomas algorithm).
std::vector<double> sobolev_smooth(const std::vector<double>& g, double ell, double dt) {
  const std::size_t n = g.size();
  if (ell <= 0.0 || n < 3) return g;
  const double a = ell * ell / (dt * dt);
  std::vector<double> c(n), out(n);
  // rows: -a x_{i-1} + (1 + 2a) x_i - a x_{i+1}; ends use a mirrored ghost node
  auto diag = [&](std::size_t) { return 1.0 + 2.0 * a; };
  auto upper = [&](std::size_t i) { return i == 0 ? -2.0 * a : -a; };
  auto lower = [&](std::size_t i) { return i + 1 == n ? -2.0 * a : -a; };
  double denom = diag(0);
  c[0] = upper(0) / denom;
  out[0] = g[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag(i) - lower(i) * c[i - 1];
    c[i] = (i + 1 < n) ? upper(i) / denom : 0.0;
    out[i] = (g[i] - lower(i) * out[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) out[i] -= c[i] * out[i + 1];
  return out;
}

}  // namespace

ObjectiveEval evaluate_objective(const LevelScheme& scheme, const ControlPulse& pulse,
                                 const PhotonWaveform& photon, const SimGrid& grid,
                                 Objective objective) {
  Propagator prop(scheme, pulse, grid);
  ObjectiveEval ev;
  auto fwd = prop.forward(photon.samples, {.keep_track = true});
  ev.eta_s = fwd.eta_s;
  if (objective == Objective::storage) {
    // d||S_T||^2 = 2 Re <S_T, dS_T>
    auto adj = prop.adjoint(fwd.spin_wave, &*fwd.track, false);
    ev.gradient = std::move(*adj.gradient);
    ev.eta_tot = grid_norm(adj.output, grid);
    ev.value = ev.eta_s;
    return ev;
  }
  // eta_tot = ||A* A e||^2 where A* (the retrieval map) is the weighted
  // transpose of storage A. Its variation splits into two storage
  // sensitivities: 2 Re <A E_out, dA e> + 2 Re <S_T, dA E_out>.
  auto ret = prop.adjoint(fwd.spin_wave, nullptr, false);
  ev.eta_tot = grid_norm(ret.output, grid);
  ev.value = ev.eta_tot;
  auto fwd_out = prop.forward(ret.output, {.keep_track = true});
  {
    auto a1 = prop.adjoint(fwd_out.spin_wave, &*fwd.track, false);
    ev.gradient = std::move(*a1.gradient);
  }
  fwd.track.reset();
  auto a2 = prop.adjoint(fwd.spin_wave, &*fwd_out.track, false);
  add_into(ev.gradient, *a2.gradient);
  return ev;
}

std::vector<double> functional_gradient(const FieldState& forward, const FieldState& adjoint,
                                        const LevelScheme& scheme, const SimGrid& grid) {
  if (forward.n_z != grid.n_z() || forward.n_t != grid.n_t() || adjoint.n_z != grid.n_z() ||
      adjoint.n_t != grid.n_t()) {
    throw Error(ErrorCode::grid_mismatch, "field states do not match the grid");
  }
  const bool p2 = !forward.P2.empty() && !adjoint.P2.empty();
  std::vector<double> g(grid.n_t(), 0.0);
  for (std::size_t m = 0; m < grid.n_t(); ++m) {
    double acc = 0.0;
    for (std::size_t j = 0; j < grid.n_z(); ++j) {
      const std::size_t i = forward.index(j, m);
      cplx mp = scheme.mu_1s * forward.P1[i];
      cplx mpb = scheme.mu_1s * adjoint.P1[i];
      if (p2) {
        mp += scheme.mu_2s * forward.P2[i];
        mpb += scheme.mu_2s * adjoint.P2[i];
      }
      const cplx v = std::conj(adjoint.S[i]) * mp - mpb * std::conj(forward.S[i]);
      acc += grid.z_weight(j) * v.imag();
    }
    g[m] = -2.0 * acc;
  }
  return g;
}

ControlPulse default_initial_pulse(const SimGrid& grid, double T1) {
  return ControlPulse::gaussian(grid, 0.5 * grid.T(), T1, 10.0);
}

std::vector<double> default_initial_centers(const SimGrid& grid, double T1) {
  std::vector<double> c{0.5 * grid.T()};
  if (std::abs(2.0 * T1 - c[0]) > grid.dt()) c.push_back(2.0 * T1);
  return c;
}

OptimizationResult ascend(const LevelScheme& scheme, const PhotonWaveform& photon,
                          const SimGrid& grid, const ControlPulse& init_pulse,
                          const AscentConfig& cfg) {
  cfg.validate();
  if (init_pulse.size() != grid.n_t()) {
    throw Error(ErrorCode::grid_mismatch, "initial pulse does not match the time grid");
  }
  if (!init_pulse.finite()) throw Error(ErrorCode::invalid_argument, "initial pulse is not finite");
  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };

  OptimizationResult res;
  res.init_pulse = init_pulse;
  ControlPulse x = init_pulse;
  ObjectiveEval cur = evaluate_objective(scheme, x, photon, grid, cfg.objective);
  auto stop_value = [&](const ObjectiveEval& e) { return cfg.stop_on_total ? e.eta_tot : e.value; };
  std::vector<double> values{stop_value(cur)};
  res.trace.push_back({0, cur.eta_s, cur.eta_tot, 0.0,
                       std::sqrt(tau_dot(cur.gradient, cur.gradient, grid)), 0, true});

  bool stagnated = false;
  std::vector<double> d, g_prev;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    if (cfg.time_budget_s > 0.0 && elapsed() > cfg.time_budget_s) {
      res.stop_reason = "timeout";
      break;
    }
    std::vector<double> gs = cur.gradient;
    for (double& v : gs) v *= scheme.gamma;
    const std::vector<double> g = sobolev_smooth(gs, cfg.smoothing_ns, grid.dt());
    const double gg = tau_dot(g, g, grid);
    if (!(gg > 0.0)) {
      res.converged = true;
      res.stop_reason = "zero gradient";
      break;
    }
    double slope = 0.0;
    if (cfg.search == SearchRule::conjugate && !d.empty()) {
      const double beta =
          std::max(0.0, (gg - tau_dot(g, g_prev, grid)) / tau_dot(g_prev, g_prev, grid));
      for (std::size_t m = 0; m < d.size(); ++m) d[m] = g[m] + beta * d[m];
      slope = tau_dot(gs, d, grid);
    }
    if (!(slope > 0.0)) {
      d = g;
      slope = tau_dot(gs, g, grid);
    }
    g_prev = g;
    double lambda = cfg.lambda_init;
    bool accepted = false;
    int halvings = 0;
    for (; halvings <= cfg.max_halvings; ++halvings, lambda *= cfg.shrink) {
      ControlPulse trial = x;
      auto& ts = trial.mutable_samples();
      for (std::size_t m = 0; m < ts.size(); ++m) ts[m] += lambda * d[m];
      if (!trial.finite()) continue;
      double value;
      try {
        Propagator prop(scheme, trial, grid);
        auto v = objective_value(prop, photon, cfg.objective);
        value = cfg.objective == Objective::total ? v.second : v.first;
      } catch (const SolverInstability&) {
        continue;
      }
      if (!(value >= cur.value + cfg.wolfe_c1 * lambda * slope)) continue;
      ObjectiveEval next = evaluate_objective(scheme, trial, photon, grid, cfg.objective);
      const bool curvature =
          scheme.gamma * tau_dot(next.gradient, d, grid) <= cfg.wolfe_c2 * slope;
      // A shorter step cannot repair the curvature condition, so the
      // sufficient-increase step is taken and flagged.
      x = std::move(trial);
      cur = std::move(next);
      accepted = true;
      res.trace.push_back({it, cur.eta_s, cur.eta_tot, lambda,
                           std::sqrt(tau_dot(cur.gradient, cur.gradient, grid)), halvings,
                           curvature});
      break;
    }
    if (!accepted) {
      stagnated = true;
      res.stop_reason = "line search exhausted";
      break;
    }
    values.push_back(stop_value(cur));
    const std::size_t n = values.size();
    if (n > static_cast<std::size_t>(cfg.history)) {
      double mean = 0.0;
      for (std::size_t i = n - 1 - cfg.history; i < n - 1; ++i) mean += values[i];
      mean /= cfg.history;
      if (values.back() - mean < cfg.tol_rel * values.back()) {
        res.converged = true;
        res.stop_reason = "relative improvement below tolerance";
        break;
      }
    }
    if (it == cfg.max_iters) res.stop_reason = "iteration cap";
  }

  res.pulse = x;
  res.omega_m = x.omega_m();
  res.report = evaluate(scheme, x, photon, grid);
  const auto& s = x.samples();
  if (!s.empty() && std::abs(s.back()) > 0.05 * res.omega_m) {
    res.warnings.push_back("control pulse does not decay toward the end of the window");
  }
  if (stagnated) throw StagnationError(std::move(res));
  return res;
}

EfficiencyReport cross_evaluate(const OptimizationResult& from, const LevelScheme& scheme_to,
                                const PhotonWaveform& photon, const SimGrid& grid) {
  return evaluate(scheme_to, from.pulse, photon, grid);
}

OptimizationResult ascend_multi(const LevelScheme& scheme, const PhotonWaveform& photon,
                                const SimGrid& grid, const std::vector<ControlPulse>& inits,
                                const AscentConfig& cfg) {
  if (inits.empty()) throw Error(ErrorCode::invalid_argument, "no trial pulses");
  std::optional<OptimizationResult> best;
  std::vector<double> finals;
  for (std::size_t k = 0; k < inits.size(); ++k) {
    OptimizationResult r;
    try {
      r = ascend(scheme, photon, grid, inits[k], cfg);
    } catch (const StagnationError& e) {
      r = e.partial();
    }
    finals.push_back(r.report.eta_tot);
    if (!best || r.report.eta_tot > best->report.eta_tot) {
      r.start_index = static_cast<int>(k);
      best = std::move(r);
    }
  }
  best->start_eta_tot = finals;
  return std::move(*best);
}

}  // namespace qdmem
