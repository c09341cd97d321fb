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
#include "commands.hpp"

#include <filesystem>

#include "json.hpp"
#include "qdmem/errors.hpp"
#include "qdmem/noise.hpp"
#include "qdmem/report.hpp"
#include "qdmem/sweeps.hpp"

namespace qdmem {

using json = nlohmann::json;

namespace {

constexpr double kWaist = 350e-6;  // m

json envelope(const std::string& command, const RunConfig& cfg) {
  json j;
  j["format_version"] = kFormatVersion;
  j["command"] = command;
  json c = json::object();
  for (const auto& key : cfg.keys()) {
    const auto dot = key.find('.');
    c[key.substr(0, dot)][key.substr(dot + 1)] = cfg.get(key);
  }
  j["config"] = c;
  j["config_text"] = cfg.to_text();
  return j;
}

void side_file(const RunConfig& cfg, const std::string& name, const std::string& text) {
  if (cfg.csv_dir.empty()) return;
  std::filesystem::create_directories(cfg.csv_dir);
  write_text_file((std::filesystem::path(cfg.csv_dir) / name).string(), text);
}

json report_json(const EfficiencyReport& r) {
  return {{"eta_s", r.eta_s},
          {"eta_r", r.eta_r ? json(*r.eta_r) : json(nullptr)},
          {"eta_tot", r.eta_tot},
          {"leak", r.leak},
          {"decay_loss", r.decay_loss},
          {"residual_pol", r.residual_pol},
          {"balance_defect", r.balance_defect}};
}

json optimization_json(const OptimizationResult& r, const SimGrid& grid) {
  json j = report_json(r.report);
  j["omega_m"] = r.omega_m;
  j["converged"] = r.converged;
  j["stop_reason"] = r.stop_reason;
  j["iterations"] = r.trace.empty() ? 0 : r.trace.back().iter;
  j["start_index"] = r.start_index;
  j["start_eta_tot"] = r.start_eta_tot;
  j["warnings"] = r.warnings;
  j["control_peak_power_W"] = rabi_to_peak_power(r.omega_m, kWaist);
  j["control_pulse_energy_J"] = pulse_energy(r.pulse, grid, kWaist);
  j["control_waist_m"] = kWaist;
  j["pulse"] = std::vector<double>(r.pulse.samples().begin(), r.pulse.samples().end());
  j["init_pulse"] =
      std::vector<double>(r.init_pulse.samples().begin(), r.init_pulse.samples().end());
  return j;
}

json trace_json(const OptimizationResult& r) {
  json t = json::array();
  for (const auto& e : r.trace) {
    t.push_back({{"iter", e.iter},
                 {"eta_s", e.eta_s},
                 {"eta_tot", e.eta_tot},
                 {"lambda", e.lambda},
                 {"grad_norm", e.grad_norm},
                 {"halvings", e.halvings},
                 {"curvature_ok", e.curvature_ok}});
  }
  return t;
}

OptimizationResult optimize(const RunConfig& cfg, const Setup& s) {
  return ascend_multi(s.scheme, s.photon, s.grid, initial_pulses(cfg, s.grid), cfg.ascent);
}

// The supplied pulse, or the optimum for the configured scheme.
ControlPulse control_for(const RunConfig& cfg, const Setup& s, json& meta) {
  if (!cfg.pulse.empty()) {
    meta["pulse_source"] = cfg.pulse;
    return read_pulse_csv(cfg.pulse, s.grid);
  }
  OptimizationResult r = optimize(cfg, s);
  meta["pulse_source"] = "optimized";
  meta["optimization"] = {{"eta_s", r.report.eta_s},
                          {"eta_tot", r.report.eta_tot},
                          {"omega_m", r.omega_m},
                          {"converged", r.converged}};
  return r.pulse;
}

CommandOutput cmd_solve(const RunConfig& cfg) {
  const Setup s = make_setup(cfg);
  const ControlPulse pulse = cfg.pulse.empty() ? ControlPulse::zero(s.grid)
                                               : read_pulse_csv(cfg.pulse, s.grid);
  const EfficiencyReport rep = evaluate(s.scheme, pulse, s.photon, s.grid);
  json j = envelope("solve", cfg);
  j["result"] = report_json(rep);
  j["result"]["omega_m"] = pulse.omega_m();
  if (!cfg.csv_dir.empty()) {
    const FieldState fwd = solve_storage(s.scheme, pulse, s.photon, s.grid);
    side_file(cfg, "spin_wave.csv",
              complex_z_series_csv(fwd.z_slice(fwd.S, s.grid.n_t() - 1), s.grid));
    side_file(cfg, "leak.csv",
              complex_series_csv(fwd.time_slice(fwd.E, s.grid.n_z() - 1), s.grid));
    if (rep.eta_r) {
      const FieldState adj =
          solve_adjoint(s.scheme, pulse, fwd.z_slice(fwd.S, s.grid.n_t() - 1), s.grid);
      side_file(cfg, "e_out.csv", complex_series_csv(adj.time_slice(adj.E, 0), s.grid));
    }
  }
  return {j.dump(1) + "\n", 0};
}

CommandOutput cmd_optimize(const RunConfig& cfg) {
  const Setup s = make_setup(cfg);
  const OptimizationResult r = optimize(cfg, s);
  json j = envelope("optimize", cfg);
  j["result"] = optimization_json(r, s.grid);
  if (!cfg.dump_trace.empty()) {
    json t = envelope("optimize-trace", cfg);
    t["trace"] = trace_json(r);
    write_text_file(cfg.dump_trace, t.dump(1) + "\n");
  }
  if (!cfg.dump_pulse.empty()) {
    write_text_file(cfg.dump_pulse, real_series_csv(r.pulse.samples(), s.grid, "omega_over_gamma"));
  }
  side_file(cfg, "pulse.csv", real_series_csv(r.pulse.samples(), s.grid, "omega_over_gamma"));
  return {j.dump(1) + "\n", r.converged ? 0 : static_cast<int>(ErrorCode::not_converged)};
}

CommandOutput finish_sweep(const SweepResult& r, const std::string& command, const RunConfig& cfg) {
  json j = json::parse(sweep_to_json(r));
  j["command"] = command;
  if (!r.table.empty()) {
    for (const auto& ref : reference_ids()) {
      if (ref != "none" && reference_table(ref) == r.table) {
        const RenderedReport rep = render_report(r, ref);
        j["report"] = {{"reference", ref}, {"text", rep.text}, {"all_pass", rep.all_pass}};
        side_file(cfg, "report.csv", rep.csv);
      }
    }
  }
  side_file(cfg, command + ".csv", sweep_to_csv(r));
  return {j.dump(1) + "\n", r.all_failed() ? static_cast<int>(ErrorCode::not_converged) : 0};
}

CommandOutput cmd_sweep(const RunConfig& cfg, int workers) {
  return finish_sweep(run_sweep(SweepSpec::from_config(cfg), workers), "sweep", cfg);
}

CommandOutput cmd_table(const RunConfig& cfg, int workers) {
  return finish_sweep(run_table(cfg.table, cfg.d, cfg, workers), "table", cfg);
}

CommandOutput cmd_wander(const RunConfig& cfg, int workers) {
  const Setup s = make_setup(cfg);
  json j = envelope("noise-wander", cfg);
  json meta = json::object();
  const ControlPulse pulse = control_for(cfg, s, meta);
  double widest = 0.0;
  for (double w : cfg.wander_widths) {
    if (!(w >= 0.0)) throw Error(ErrorCode::domain, "wander widths must be >= 0");
    widest = std::max(widest, w / cfg.T1);
  }
  const auto nodes = clustered_detunings(wandering_scan_limit(cfg.T1, widest), cfg.scan_points,
                                         1.0 / cfg.T1);
  const DetuningScan scan = scan_detuning(s.scheme, pulse, s.photon, s.grid, nodes, workers);
  json curve = json::array();
  std::string csv = "delta_omega_add_T1,eta_s,eta_tot\n";
  for (double w : cfg.wander_widths) {
    const WanderingResult r = wandering_average(scan, w / cfg.T1);
    curve.push_back({{"delta_omega_add_T1", w},
                     {"eta_s", r.eta_s},
                     {"eta_tot", r.eta_tot},
                     {"kernel_mass", r.kernel_mass},
                     {"truncation_bound", r.truncation_bound},
                     {"warning", r.warning}});
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", w, r.eta_s, r.eta_tot);
    csv += buf;
  }
  std::string scan_csv = "delta_g_rad_per_ns,eta_s,eta_tot\n";
  for (std::size_t i = 0; i < scan.detunings.size(); ++i) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", scan.detunings[i], scan.eta_s[i],
                  scan.eta_tot[i]);
    scan_csv += buf;
  }
  j["control"] = meta;
  j["scan"] = {{"delta_g", scan.detunings},
               {"eta_s", scan.eta_s},
               {"eta_tot", scan.eta_tot},
               {"errors", scan.errors},
               {"delta_s", scan.delta_s}};
  j["wandering"] = curve;
  side_file(cfg, "wander.csv", csv);
  side_file(cfg, "detuning_scan.csv", scan_csv);
  return {j.dump(1) + "\n", 0};
}

CommandOutput cmd_dephase(const RunConfig& cfg, int workers) {
  const Setup s = make_setup(cfg);
  json j = envelope("noise-dephase", cfg);
  json meta = json::object();
  const ControlPulse pulse = control_for(cfg, s, meta);
  json rows = json::array();
  std::string csv = "D_phi_T1,eta_s,eta_tot,std_s,std_tot\n";
  for (double w : cfg.d_phi) {
    const DephasingEnsemble e = dephasing_monte_carlo(s.scheme, pulse, s.grid, cfg.T1, w / cfg.T1,
                                                      cfg.n_traj, cfg.seed, workers);
    rows.push_back({{"D_phi_T1", w},
                    {"D_phi", e.D_phi},
                    {"n_traj", e.n_traj},
                    {"seed", e.seed},
                    {"eta_s_mean", e.eta_s_mean},
                    {"eta_s_std", e.eta_s_std},
                    {"eta_tot_mean", e.eta_tot_mean},
                    {"eta_tot_std", e.eta_tot_std}});
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g,%.10g\n", w, e.eta_s_mean,
                  e.eta_tot_mean, e.eta_s_std, e.eta_tot_std);
    csv += buf;
  }
  j["control"] = meta;
  j["dephasing"] = rows;
  side_file(cfg, "dephase.csv", csv);
  return {j.dump(1) + "\n", 0};
}

CommandOutput cmd_fwm(const RunConfig& cfg) {
  const Setup s = make_setup(cfg);
  json j = envelope("fwm-check", cfg);
  json meta = json::object();
  const ControlPulse pulse = control_for(cfg, s, meta);
  const EfficiencyReport plain = evaluate(s.scheme, pulse, s.photon, s.grid);
  const FwmSolution f = solve_storage_fwm(s.scheme, pulse, s.photon, s.grid);
  j["control"] = meta;
  j["plain"] = report_json(plain);
  j["fwm"] = report_json(f.report);
  j["delta_eta_s_pts"] = 100.0 * (f.report.eta_s - plain.eta_s);
  j["delta_eta_tot_pts"] = 100.0 * (f.report.eta_tot - plain.eta_tot);
  j["drive_ratio"] = f.drive_ratio;
  j["ratio_estimate"] = fwm_ratio_estimate(s.scheme);
  return {j.dump(1) + "\n", 0};
}

}  // namespace

CommandOutput run_command(const std::string& command, const RunConfig& raw, int workers) {
  if (workers < 1) throw Error(ErrorCode::invalid_argument, "workers must be >= 1");
  if (command == "catalog") {
    json j;
    j["format_version"] = kFormatVersion;
    j["command"] = "catalog";
    j["catalog_version"] = kCatalogVersion;
    j["csv"] = Rb87Catalog::instance().export_csv();
    return {j.dump(1) + "\n", 0};
  }
  const RunConfig cfg = raw.resolved();
  if (command == "solve") return cmd_solve(cfg);
  if (command == "optimize") return cmd_optimize(cfg);
  if (command == "sweep") return cmd_sweep(cfg, workers);
  if (command == "table") return cmd_table(cfg, workers);
  if (command == "noise-wander") return cmd_wander(cfg, workers);
  if (command == "noise-dephase") return cmd_dephase(cfg, workers);
  if (command == "fwm-check") return cmd_fwm(cfg);
  throw Error(ErrorCode::invalid_argument, "unknown command '" + command + "'");
}

}  // namespace qdmem
