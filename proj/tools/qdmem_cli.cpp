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
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qdmem/qdmem.h"

namespace {

struct Overrides {
  // flag storage, applied in declaration order after the config file
  std::vector<std::pair<std::string, std::unique_ptr<std::string>>> values;
  std::vector<std::string> sets;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    values.emplace_back(key, std::make_unique<std::string>());
    app->add_option(flag, *values.back().second, help + " [" + key + "]");
  }
};

struct Cleanup {
  qdm_config* cfg = nullptr;
  ~Cleanup() { qdm_config_free(cfg); }
};

int fail(int code) {
  std::fprintf(stderr, "qdmem: %s: %s\n", qdm_error_name(code), qdm_last_error());
  return code;
}

bool write_out(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    std::fprintf(stderr, "qdmem: io: cannot write %s\n", path.c_str());
    return false;
  }
  return true;
}

void physics_flags(CLI::App* c, Overrides& o) {
  o.add(c, "--scheme", "scheme.label", "catalog label");
  o.add(c, "--d", "scheme.d", "optical depth (half the standard definition)");
  o.add(c, "--delta-g", "scheme.delta_g_mhz", "photon detuning, MHz");
  o.add(c, "--delta-s", "scheme.delta_s_mhz", "control detuning, MHz");
  o.add(c, "--n-z", "grid.n_z", "z nodes");
  o.add(c, "--n-t", "grid.n_t", "tau nodes");
  o.add(c, "--T", "grid.T", "window length, ns (0 = 10 T1)");
  o.add(c, "--waveform", "photon.waveform", "sharp-exponential | loaded-exponential");
  o.add(c, "--T1", "photon.T1", "photon lifetime, ns");
  o.add(c, "--T-L", "photon.T_L", "loading time, ns");
  o.add(c, "--csv", "output.csv_dir", "directory for CSV side files");
}

void ascent_flags(CLI::App* c, Overrides& o) {
  o.add(c, "--init-pulse", "ascent.init_pulse", "trial pulse CSV (tau_ns, omega/gamma)");
  o.add(c, "--init-centers", "ascent.init_centers", "Gaussian trial centres, ns (comma list)");
  o.add(c, "--lambda", "ascent.lambda_init", "initial step");
  o.add(c, "--tol", "ascent.tol_rel", "relative convergence tolerance");
  o.add(c, "--max-iters", "ascent.max_iters", "iteration cap");
  o.add(c, "--objective", "ascent.objective", "storage | total");
  o.add(c, "--search", "ascent.search", "steepest | conjugate");
  o.add(c, "--time-budget", "ascent.time_budget_s", "seconds per ascent (0 = none)");
}

int default_workers() {
  if (const char* w = std::getenv("QDMEM_WORKERS")) {
    const int n = std::atoi(w);
    if (n >= 1) return n;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qdmem: optimal control of broadband photon storage in atomic ensembles"};
  app.require_subcommand(0, 1);
  app.set_help_all_flag("--help-all", "expand all help");
  app.fallthrough();  // global options may follow the subcommand

  std::string config_file, out_file;
  int workers = default_workers();
  bool print_config = false;
  Overrides o;
  app.add_option("--config", config_file, "config file or earlier JSON result");
  app.add_option("--set", o.sets, "override key=value (repeatable)");
  app.add_option("--out", out_file, "write the JSON result here instead of stdout");
  app.add_option("--workers", workers, "worker threads (default $QDMEM_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--print-config", print_config, "print the resolved config and exit");

  auto* solve = app.add_subcommand("solve", "storage + retrieval for a given control pulse");
  physics_flags(solve, o);
  o.add(solve, "--pulse", "solve.pulse", "control CSV (tau_ns, omega/gamma); default zero");

  auto* optimize = app.add_subcommand("optimize", "gradient ascent on the control pulse");
  physics_flags(optimize, o);
  ascent_flags(optimize, o);
  o.add(optimize, "--dump-trace", "output.dump_trace", "iteration trace JSON");
  o.add(optimize, "--dump-pulse", "output.dump_pulse", "optimized pulse CSV");

  auto* sweep = app.add_subcommand("sweep", "multi-point study");
  physics_flags(sweep, o);
  ascent_flags(sweep, o);
  o.add(sweep, "--kind", "sweep.kind", "optical-depth | detuning-reoptimize | config-table | high-od");
  o.add(sweep, "--points", "sweep.points", "comma list (d, or delta in units of Delta_e)");
  o.add(sweep, "--labels", "sweep.labels", "comma list of catalog labels");
  o.add(sweep, "--warm-start", "sweep.warm_start", "true | false");

  auto* table = app.add_subcommand("table", "optimize every row of a configuration table");
  physics_flags(table, o);
  ascent_flags(table, o);
  o.add(table, "--table", "sweep.table", "D2-stretch | D2-clock | D1-stretch | D1-clock | scenarios");

  auto* noise = app.add_subcommand("noise", "photon noise studies");
  noise->require_subcommand(1);
  auto* wander = noise->add_subcommand("wander", "Lorentzian spectral wandering");
  physics_flags(wander, o);
  ascent_flags(wander, o);
  o.add(wander, "--pulse", "solve.pulse", "fixed control CSV (default: optimize first)");
  o.add(wander, "--widths", "noise.wander_widths", "FWHM list in units of 1/T1");
  o.add(wander, "--scan-points", "noise.scan_points", "detuning nodes");
  auto* dephase = noise->add_subcommand("dephase", "Monte Carlo phase diffusion");
  physics_flags(dephase, o);
  ascent_flags(dephase, o);
  o.add(dephase, "--pulse", "solve.pulse", "fixed control CSV (default: optimize first)");
  o.add(dephase, "--d-phi", "noise.d_phi", "diffusion constants in units of 1/T1");
  o.add(dephase, "--n-traj", "noise.n_traj", "trajectories");
  o.add(dephase, "--seed", "noise.seed", "PRNG seed");

  auto* fwm = app.add_subcommand("fwm-check", "compare with the Stokes-extended solver");
  physics_flags(fwm, o);
  ascent_flags(fwm, o);
  o.add(fwm, "--pulse", "solve.pulse", "fixed control CSV (default: optimize first)");

  auto* catalog = app.add_subcommand("catalog", "level-scheme catalog");
  catalog->require_subcommand(1);
  auto* cexport = catalog->add_subcommand("export", "write the catalog as CSV");

  auto* report = app.add_subcommand("report", "compare a sweep/table result with a reference");
  std::string results_file, reference = "none", report_csv;
  report->add_option("--results", results_file, "JSON written by sweep or table")->required();
  report->add_option("--reference", reference,
                     "table-II | table-IV | table-VI | table-VIII | scenarios | none");
  report->add_option("--csv", report_csv, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : QDM_ERR_INVALID_ARGUMENT;
  }

  if (cexport->parsed()) {
    char* csv = nullptr;
    const int rc = qdm_catalog_csv(&csv);
    if (rc != QDM_OK) return fail(rc);
    const bool ok = write_out(out_file, csv);
    qdm_free(csv);
    return ok ? 0 : QDM_ERR_IO;
  }

  if (report->parsed()) {
    std::ifstream f(results_file, std::ios::binary);
    if (!f) {
      std::fprintf(stderr, "qdmem: io: cannot read %s\n", results_file.c_str());
      return QDM_ERR_IO;
    }
    const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    char *txt = nullptr, *csv = nullptr;
    int all_pass = 0;
    const int rc = qdm_report(text.c_str(), reference.c_str(), &txt, &csv, &all_pass);
    if (rc != QDM_OK) return fail(rc);
    bool ok = write_out(out_file, txt);
    if (!report_csv.empty()) ok = write_out(report_csv, csv) && ok;
    qdm_free(txt);
    qdm_free(csv);
    return ok ? 0 : QDM_ERR_IO;
  }

  Cleanup c;
  int rc = qdm_config_new(&c.cfg);
  if (rc != QDM_OK) return fail(rc);
  if (!config_file.empty() && (rc = qdm_config_load_file(c.cfg, config_file.c_str())) != QDM_OK) {
    return fail(rc);
  }
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "qdmem: --set expects key=value, got '%s'\n", kv.c_str());
      return QDM_ERR_INVALID_ARGUMENT;
    }
    rc = qdm_config_set(c.cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (rc != QDM_OK) return fail(rc);
  }
  for (const auto& [key, value] : o.values) {
    if (value->empty()) continue;
    if ((rc = qdm_config_set(c.cfg, key.c_str(), value->c_str())) != QDM_OK) return fail(rc);
  }
  if (print_config) {
    char* text = nullptr;
    if ((rc = qdm_config_text(c.cfg, 1, &text)) != QDM_OK) return fail(rc);
    std::fputs(text, stdout);
    qdm_free(text);
    return 0;
  }

  std::string command;
  if (solve->parsed()) command = "solve";
  if (optimize->parsed()) command = "optimize";
  if (sweep->parsed()) command = "sweep";
  if (table->parsed()) command = "table";
  if (wander->parsed()) command = "noise-wander";
  if (dephase->parsed()) command = "noise-dephase";
  if (fwm->parsed()) command = "fwm-check";
  if (command.empty()) {
    std::fprintf(stderr, "qdmem: a subcommand is required\n%s", app.help().c_str());
    return QDM_ERR_INVALID_ARGUMENT;
  }

  qdm_result* res = nullptr;
  rc = qdm_run(c.cfg, command.c_str(), workers, &res);
  if (rc != QDM_OK) return fail(rc);
  const bool ok = write_out(out_file, qdm_result_json(res));
  const int status = qdm_result_status(res);
  qdm_result_free(res);
  if (!ok) return QDM_ERR_IO;
  if (status != QDM_OK) {
    std::fprintf(stderr, "qdmem: %s\n",
                 command == "optimize" ? "ascent stopped without converging"
                                       : "every sweep point failed");
  }
  return status;
}
