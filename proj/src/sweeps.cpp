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
#include "qdmem/sweeps.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "qdmem/errors.hpp"
#include "qdmem/noise.hpp"

namespace qdmem {

using json = nlohmann::json;

Setup make_setup(const RunConfig& cfg) {
  SimGrid grid(cfg.n_z, cfg.n_t, cfg.window());
  LevelScheme scheme = lookup_scheme(cfg.scheme, cfg.d, units::mhz(cfg.delta_g_mhz),
                                     units::mhz(cfg.delta_s_mhz));
  PhotonWaveform photon =
      make_waveform(waveform_kind_from_string(cfg.waveform), cfg.T1, cfg.T_L, grid);
  return {std::move(scheme), grid, std::move(photon)};
}

std::vector<ControlPulse> initial_pulses(const RunConfig& cfg, const SimGrid& grid) {
  if (!cfg.init_pulse.empty()) return {read_pulse_csv(cfg.init_pulse, grid)};
  const double width = cfg.init_width > 0.0 ? cfg.init_width : cfg.T1;
  std::vector<double> centers = cfg.init_centers;
  if (centers.empty()) centers = default_initial_centers(grid, cfg.T1);
  std::vector<ControlPulse> out;
  for (double c : centers) out.push_back(ControlPulse::gaussian(grid, c, width, cfg.init_amplitude));
  return out;
}

std::string to_string(SweepKind k) {
  switch (k) {
    case SweepKind::optical_depth: return "optical-depth";
    case SweepKind::detuning_reoptimize: return "detuning-reoptimize";
    case SweepKind::config_table: return "config-table";
    case SweepKind::high_od: return "high-od";
  }
  return "?";
}

SweepKind sweep_kind_from_string(const std::string& name) {
  for (auto k : {SweepKind::optical_depth, SweepKind::detuning_reoptimize,
                 SweepKind::config_table, SweepKind::high_od}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::invalid_argument,
              "unknown sweep kind '" + name +
                  "' (optical-depth, detuning-reoptimize, config-table, high-od)");
}

std::vector<double> default_depth_points() {
  return {10.0, 15.0, 26.4, 40.0, 55.0, 78.0, 120.0, 160.0, 230.0, 400.0, 678.0, 1000.0};
}

std::vector<double> default_detuning_points() {
  std::vector<double> p;
  for (int k = -40; k <= 60; ++k) p.push_back(k / 20.0);
  return p;
}

SweepSpec SweepSpec::from_config(const RunConfig& cfg) {
  SweepSpec s;
  s.kind = sweep_kind_from_string(cfg.sweep_kind);
  s.base = cfg.resolved();
  s.points = cfg.points;
  s.labels = cfg.labels;
  s.warm_start = cfg.warm_start;
  if (cfg.ascent.time_budget_s > 0.0) s.point_budget_s = cfg.ascent.time_budget_s;
  switch (s.kind) {
    case SweepKind::optical_depth:
      if (s.points.empty()) s.points = default_depth_points();
      break;
    case SweepKind::detuning_reoptimize:
      if (s.points.empty()) s.points = default_detuning_points();
      break;
    case SweepKind::config_table:
      if (s.points.empty()) s.points = {cfg.d};
      if (s.labels.empty()) s.labels = {cfg.scheme};
      break;
    case SweepKind::high_od:
      if (s.points.empty()) s.points = {500.0};
      if (s.labels.empty()) s.labels = {"D1-clock-config2", "D2-clock-config4"};
      break;
  }
  return s;
}

void SweepSpec::validate() const {
  if (points.empty()) throw Error(ErrorCode::invalid_argument, "sweep has no points");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i] > points[i - 1])) {
      throw Error(ErrorCode::invalid_argument, "sweep points must be strictly increasing");
    }
  }
  if (kind == SweepKind::optical_depth || kind == SweepKind::config_table ||
      kind == SweepKind::high_od) {
    for (double p : points) {
      if (!(p >= 0.0)) throw Error(ErrorCode::parameter, "optical depth must be >= 0");
    }
  }
  if (kind == SweepKind::config_table || kind == SweepKind::high_od) {
    if (labels.empty()) throw Error(ErrorCode::invalid_argument, "sweep has no labels");
    for (const auto& l : labels) lookup_scheme(l, 1.0);
  } else {
    lookup_scheme(base.scheme, 1.0);
  }
}

bool SweepResult::all_failed() const {
  if (records.empty()) return true;
  for (const auto& r : records) {
    if (r.status != "failed") return false;
  }
  return true;
}

const SweepRecord* SweepResult::find(const std::string& label) const {
  for (const auto& r : records) {
    if (r.label == label) return &r;
  }
  return nullptr;
}

namespace {

struct Job {
  std::string label;
  double param = 0.0;
  double d = 0.0;
  std::optional<double> delta;  // common detuning override, rad/ns
};

void fill(SweepRecord& rec, const OptimizationResult& res, const Setup& s) {
  rec.eta_s = res.report.eta_s;
  rec.eta_r = res.report.eta_r;
  rec.eta_tot = res.report.eta_tot;
  rec.omega_m = res.omega_m;
  rec.balance_defect = res.report.balance_defect;
  rec.converged = res.converged;
  rec.iterations = res.trace.empty() ? 0 : res.trace.back().iter;
  rec.start_index = res.start_index;
  rec.stop_reason = res.stop_reason;
  rec.warnings = res.warnings;
  rec.pulse.assign(res.pulse.samples().begin(), res.pulse.samples().end());
  rec.status = res.stop_reason == "timeout" ? "timeout" : "ok";
  rec.delta = s.scheme.delta_g;
}

SweepRecord run_job(const SweepSpec& spec, std::size_t index, const Job& job,
                    const std::optional<ControlPulse>& warm) {
  SweepRecord rec;
  rec.index = index;
  rec.label = job.label;
  rec.scheme = job.label;
  rec.param = job.param;
  rec.d = job.d;
  try {
    RunConfig cfg = spec.base;
    cfg.scheme = job.label;
    cfg.d = job.d;
    Setup s = make_setup(cfg);
    if (job.delta) {
      s.scheme.delta_g = *job.delta;
      s.scheme.delta_s = *job.delta;
    }
    rec.delta = s.scheme.delta_g;
    AscentConfig acfg = cfg.ascent;
    if (spec.point_budget_s > 0.0) acfg.time_budget_s = spec.point_budget_s;
    std::vector<ControlPulse> inits =
        warm ? std::vector<ControlPulse>{*warm} : initial_pulses(cfg, s.grid);
    fill(rec, ascend_multi(s.scheme, s.photon, s.grid, inits, acfg), s);
  } catch (const std::exception& e) {
    rec.status = "failed";
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, int workers) {
  spec.validate();
  std::vector<Job> jobs;
  switch (spec.kind) {
    case SweepKind::optical_depth:
      for (double p : spec.points) jobs.push_back({spec.base.scheme, p, p, std::nullopt});
      break;
    case SweepKind::detuning_reoptimize: {
      const double de = lookup_scheme(spec.base.scheme, spec.base.d).delta_e;
      if (de == 0.0) {
        throw Error(ErrorCode::parameter, "detuning sweeps need a scheme with Delta_e != 0");
      }
      for (double p : spec.points) jobs.push_back({spec.base.scheme, p, spec.base.d, p * de});
      break;
    }
    case SweepKind::config_table:
    case SweepKind::high_od:
      for (double p : spec.points) {
        for (const auto& l : spec.labels) jobs.push_back({l, p, p, std::nullopt});
      }
      break;
  }

  const bool chain = spec.warm_start && (spec.kind == SweepKind::optical_depth ||
                                         spec.kind == SweepKind::detuning_reoptimize);
  SweepResult out;
  out.kind = to_string(spec.kind);
  out.config = spec.base;
  out.warm_start = chain;
  out.records.resize(jobs.size());
  if (chain) {
    std::optional<ControlPulse> warm;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      out.records[i] = run_job(spec, i, jobs[i], warm);
      if (out.records[i].status != "failed") warm = ControlPulse(out.records[i].pulse);
    }
  } else {
    parallel_for(jobs.size(), workers,
                 [&](std::size_t i) { out.records[i] = run_job(spec, i, jobs[i], std::nullopt); });
  }
  return out;
}

std::vector<std::string> table_ids() {
  return {"D2-stretch", "D2-clock", "D1-stretch", "D1-clock", "scenarios"};
}

namespace {

struct CrossRow {
  std::string name, from, to;
};

struct TableLayout {
  std::vector<std::string> rows;
  std::vector<CrossRow> cross;
};

TableLayout table_layout(const std::string& id) {
  auto configs = [&](int n) {
    std::vector<std::string> r;
    for (int k = 1; k <= n; ++k) r.push_back(id + "-config" + std::to_string(k));
    return r;
  };
  if (id == "D2-stretch" || id == "D2-clock") return {configs(4), {}};
  if (id == "D1-stretch") return {configs(2), {}};
  if (id == "D1-clock") {
    return {configs(3), {{"D1-clock-config4", "D1-clock-config3", "D1-clock-config2"}}};
  }
  if (id == "scenarios") {
    return {{"ideal-3L", "4L+", "4L-"},
            {{"4L+ (3L pulse)", "ideal-3L", "4L+"}, {"4L- (3L pulse)", "ideal-3L", "4L-"}}};
  }
  std::string valid;
  for (const auto& t : table_ids()) valid += (valid.empty() ? "" : ", ") + t;
  throw Error(ErrorCode::invalid_argument, "unknown table '" + id + "' (" + valid + ")");
}

}  // namespace

SweepResult run_table(const std::string& table_id, double d, const RunConfig& base, int workers) {
  const TableLayout layout = table_layout(table_id);
  if (!(d > 0.0)) throw Error(ErrorCode::parameter, "table optical depth must be > 0");
  SweepSpec spec;
  spec.kind = SweepKind::config_table;
  spec.base = base.resolved();
  spec.base.d = d;
  spec.base.table = table_id;
  spec.points = {d};
  spec.labels = layout.rows;
  spec.warm_start = false;
  if (base.ascent.time_budget_s > 0.0) spec.point_budget_s = base.ascent.time_budget_s;
  SweepResult out = run_sweep(spec, workers);
  out.table = table_id;

  for (const auto& c : layout.cross) {
    SweepRecord rec;
    rec.index = out.records.size();
    rec.label = c.name;
    rec.scheme = c.to;
    rec.cross_from = c.from;
    rec.param = d;
    rec.d = d;
    const SweepRecord* src = out.find(c.from);
    if (!src || src->status == "failed") {
      rec.status = "failed";
      rec.error = "source row " + c.from + " did not produce a pulse";
    } else {
      try {
        RunConfig cfg = spec.base;
        cfg.scheme = c.to;
        Setup s = make_setup(cfg);
        const ControlPulse pulse(src->pulse);
        const EfficiencyReport rep = evaluate(s.scheme, pulse, s.photon, s.grid);
        rec.eta_s = rep.eta_s;
        rec.eta_r = rep.eta_r;
        rec.eta_tot = rep.eta_tot;
        rec.omega_m = pulse.omega_m();
        rec.balance_defect = rep.balance_defect;
        rec.converged = src->converged;
        rec.stop_reason = "cross-evaluated";
        rec.pulse = src->pulse;
        rec.delta = s.scheme.delta_g;
      } catch (const std::exception& e) {
        rec.status = "failed";
        rec.error = e.what();
      }
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

namespace {

json config_json(const RunConfig& c) {
  json j = json::object();
  for (const auto& key : c.keys()) {
    const auto dot = key.find('.');
    j[key.substr(0, dot)][key.substr(dot + 1)] = c.get(key);
  }
  return j;
}

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string sweep_to_json(const SweepResult& r) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = r.kind;
  if (!r.table.empty()) j["table"] = r.table;
  json prov;
  prov["catalog_version"] = kCatalogVersion;
  prov["grid"] = {{"n_z", r.config.n_z}, {"n_t", r.config.n_t}, {"T_ns", r.config.window()}};
  prov["waveform"] = {{"kind", r.config.waveform}, {"T1_ns", r.config.T1}, {"T_L_ns", r.config.T_L}};
  prov["warm_start"] = r.warm_start;
  prov["seed"] = r.config.seed;
  if (r.config.timestamps) {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    prov["created_utc"] = buf;
  }
  j["provenance"] = prov;
  j["config"] = config_json(r.config);
  j["config_text"] = r.config.to_text();
  json recs = json::array();
  for (const auto& x : r.records) {
    json o;
    o["index"] = x.index;
    o["label"] = x.label;
    o["scheme"] = x.scheme;
    if (!x.cross_from.empty()) o["cross_from"] = x.cross_from;
    o["param"] = x.param;
    o["d"] = x.d;
    o["delta_rad_per_ns"] = x.delta;
    o["status"] = x.status;
    if (!x.error.empty()) o["error"] = x.error;
    o["eta_s"] = num_or_null(x.eta_s);
    o["eta_r"] = x.eta_r ? num_or_null(*x.eta_r) : json(nullptr);
    o["eta_tot"] = num_or_null(x.eta_tot);
    o["omega_m"] = num_or_null(x.omega_m);
    o["balance_defect"] = num_or_null(x.balance_defect);
    o["converged"] = x.converged;
    o["iterations"] = x.iterations;
    o["start_index"] = x.start_index;
    o["stop_reason"] = x.stop_reason;
    o["warnings"] = x.warnings;
    o["pulse"] = x.pulse;
    recs.push_back(std::move(o));
  }
  j["records"] = std::move(recs);
  return j.dump(1) + "\n";
}

SweepResult sweep_from_json(const std::string& text) {
  SweepResult r;
  try {
    const json j = json::parse(text);
    if (!j.contains("format_version")) {
      throw Error(ErrorCode::report, "result file has no format_version");
    }
    r.kind = j.at("kind").get<std::string>();
    r.table = j.value("table", "");
    r.config.load_text(j.at("config_text").get<std::string>());
    r.warm_start = j.at("provenance").value("warm_start", false);
    auto num = [](const json& v) {
      return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    };
    for (const auto& o : j.at("records")) {
      SweepRecord x;
      x.index = o.at("index").get<std::size_t>();
      x.label = o.at("label").get<std::string>();
      x.scheme = o.value("scheme", x.label);
      x.cross_from = o.value("cross_from", "");
      x.param = o.at("param").get<double>();
      x.d = o.at("d").get<double>();
      x.delta = o.value("delta_rad_per_ns", 0.0);
      x.status = o.at("status").get<std::string>();
      x.error = o.value("error", "");
      x.eta_s = num(o.at("eta_s"));
      if (!o.at("eta_r").is_null()) x.eta_r = o.at("eta_r").get<double>();
      x.eta_tot = num(o.at("eta_tot"));
      x.omega_m = num(o.at("omega_m"));
      x.balance_defect = num(o.value("balance_defect", json(nullptr)));
      x.converged = o.value("converged", false);
      x.iterations = o.value("iterations", 0);
      x.start_index = o.value("start_index", 0);
      x.stop_reason = o.value("stop_reason", "");
      x.warnings = o.value("warnings", std::vector<std::string>{});
      x.pulse = o.value("pulse", std::vector<double>{});
      r.records.push_back(std::move(x));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::report, std::string("malformed result file: ") + e.what());
  }
  return r;
}

std::string sweep_to_csv(const SweepResult& r) {
  std::ostringstream os;
  os.precision(10);
  os << "label,param,d,delta_rad_per_ns,status,eta_s,eta_tot,omega_m,converged\n";
  for (const auto& x : r.records) {
    os << x.label << ',' << x.param << ',' << x.d << ',' << x.delta << ',' << x.status << ','
       << x.eta_s << ',' << x.eta_tot << ',' << x.omega_m << ',' << (x.converged ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace qdmem
