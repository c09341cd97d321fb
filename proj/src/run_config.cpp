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
#include "qdmem/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <sstream>
#include <type_traits>

#include "json.hpp"
#include "qdmem/errors.hpp"
#include "qdmem/grid.hpp"
#include "qdmem/medium.hpp"

namespace qdmem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// shortest text that reads back to the same double
std::string fmt(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <class T>
std::string show(T v) {
  if constexpr (std::is_floating_point_v<T>) {
    return fmt(v);
  } else {
    return std::to_string(v);
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::invalid_argument, key + ": not a number: '" + v + "'");
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::invalid_argument, key + ": not an integer: '" + v + "'");
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    if (trim(v).rfind('-', 0) != 0) {
      const unsigned long long x = std::stoull(v, &pos);
      if (trim(v.substr(pos)).empty()) return x;
    }
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::invalid_argument, key + ": not a non-negative integer: '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::invalid_argument, key + ": not a boolean: '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Field {
  const char* section;
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
};

template <class M>
Field num(const char* sec, const char* key, M RunConfig::*m) {
  return {sec, key, [m](const RunConfig& c) { return show(c.*m); },
          [m](RunConfig& c, const std::string& k, const std::string& v) {
            if constexpr (std::is_floating_point_v<M>) {
              c.*m = to_double(k, v);
            } else if constexpr (std::is_same_v<M, std::uint64_t>) {
              c.*m = to_uint(k, v);
            } else {
              const long long x = to_int(k, v);
              if (std::is_unsigned_v<M> && x < 0) {
                throw Error(ErrorCode::invalid_argument, k + ": must be >= 0");
              }
              c.*m = static_cast<M>(x);
            }
          }};
}

template <class M>
Field anum(const char* key, M AscentConfig::*m) {
  return {"ascent", key, [m](const RunConfig& c) { return show(c.ascent.*m); },
          [m](RunConfig& c, const std::string& k, const std::string& v) {
            if constexpr (std::is_floating_point_v<M>) {
              c.ascent.*m = to_double(k, v);
            } else {
              c.ascent.*m = static_cast<M>(to_int(k, v));
            }
          }};
}

Field str(const char* sec, const char* key, std::string RunConfig::*m) {
  return {sec, key, [m](const RunConfig& c) { return c.*m; },
          [m](RunConfig& c, const std::string&, const std::string& v) { c.*m = v; }};
}

Field flag(const char* sec, const char* key, bool RunConfig::*m) {
  return {sec, key, [m](const RunConfig& c) { return std::string(c.*m ? "true" : "false"); },
          [m](RunConfig& c, const std::string& k, const std::string& v) { c.*m = to_bool(k, v); }};
}

Field dlist(const char* sec, const char* key, std::vector<double> RunConfig::*m) {
  return {sec, key,
          [m](const RunConfig& c) {
            std::string s;
            for (double x : c.*m) s += (s.empty() ? "" : ", ") + fmt(x);
            return s;
          },
          [m](RunConfig& c, const std::string& k, const std::string& v) {
            std::vector<double> out;
            for (const auto& item : split_list(v)) out.push_back(to_double(k, item));
            c.*m = out;
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      str("scheme", "label", &RunConfig::scheme),
      num("scheme", "d", &RunConfig::d),
      num("scheme", "delta_g_mhz", &RunConfig::delta_g_mhz),
      num("scheme", "delta_s_mhz", &RunConfig::delta_s_mhz),
      num("grid", "n_z", &RunConfig::n_z),
      num("grid", "n_t", &RunConfig::n_t),
      num("grid", "T", &RunConfig::T),
      str("photon", "waveform", &RunConfig::waveform),
      num("photon", "T1", &RunConfig::T1),
      num("photon", "T_L", &RunConfig::T_L),
      anum("lambda_init", &AscentConfig::lambda_init),
      anum("wolfe_c1", &AscentConfig::wolfe_c1),
      anum("wolfe_c2", &AscentConfig::wolfe_c2),
      anum("shrink", &AscentConfig::shrink),
      anum("max_halvings", &AscentConfig::max_halvings),
      anum("tol_rel", &AscentConfig::tol_rel),
      anum("history", &AscentConfig::history),
      anum("max_iters", &AscentConfig::max_iters),
      {"ascent", "objective", [](const RunConfig& c) { return to_string(c.ascent.objective); },
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.ascent.objective = objective_from_string(v);
       }},
      {"ascent", "stop_on_total",
       [](const RunConfig& c) { return std::string(c.ascent.stop_on_total ? "true" : "false"); },
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.ascent.stop_on_total = to_bool(k, v);
       }},
      {"ascent", "search", [](const RunConfig& c) { return to_string(c.ascent.search); },
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.ascent.search = search_rule_from_string(v);
       }},
      anum("time_budget_s", &AscentConfig::time_budget_s),
      anum("smoothing_ns", &AscentConfig::smoothing_ns),
      dlist("ascent", "init_centers", &RunConfig::init_centers),
      num("ascent", "init_width", &RunConfig::init_width),
      num("ascent", "init_amplitude", &RunConfig::init_amplitude),
      str("ascent", "init_pulse", &RunConfig::init_pulse),
      str("solve", "pulse", &RunConfig::pulse),
      dlist("noise", "wander_widths", &RunConfig::wander_widths),
      num("noise", "scan_points", &RunConfig::scan_points),
      dlist("noise", "d_phi", &RunConfig::d_phi),
      num("noise", "n_traj", &RunConfig::n_traj),
      num("noise", "seed", &RunConfig::seed),
      str("sweep", "kind", &RunConfig::sweep_kind),
      dlist("sweep", "points", &RunConfig::points),
      {"sweep", "labels",
       [](const RunConfig& c) {
         std::string s;
         for (const auto& x : c.labels) s += (s.empty() ? "" : ", ") + x;
         return s;
       },
       [](RunConfig& c, const std::string&, const std::string& v) { c.labels = split_list(v); }},
      flag("sweep", "warm_start", &RunConfig::warm_start),
      str("sweep", "table", &RunConfig::table),
      str("output", "out", &RunConfig::out),
      str("output", "csv_dir", &RunConfig::csv_dir),
      str("output", "dump_trace", &RunConfig::dump_trace),
      str("output", "dump_pulse", &RunConfig::dump_pulse),
      flag("output", "timestamps", &RunConfig::timestamps),
  };
  return f;
}

const Field& find_field(const std::string& key) {
  const auto dot = key.find('.');
  const Field* hit = nullptr;
  int count = 0;
  for (const auto& f : fields()) {
    const bool match = dot == std::string::npos
                           ? key == f.key
                           : key.substr(0, dot) == f.section && key.substr(dot + 1) == f.key;
    if (match) {
      hit = &f;
      ++count;
    }
  }
  if (count == 1) return *hit;
  if (count > 1) throw Error(ErrorCode::invalid_argument, "ambiguous config key '" + key + "'");
  throw Error(ErrorCode::invalid_argument, "unknown config key '" + key + "'");
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  find_field(trim(key)).set(*this, key, trim(value));
}

std::string RunConfig::get(const std::string& key) const { return find_field(key).get(*this); }

std::vector<std::string> RunConfig::keys() const {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.push_back(std::string(f.section) + "." + f.key);
  return out;
}

void RunConfig::load_text(const std::string& text) {
  std::stringstream ss(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorCode::invalid_argument,
                    "config line " + std::to_string(lineno) + ": unterminated section");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::invalid_argument,
                  "config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    set(section.empty() ? key : section + "." + key, line.substr(eq + 1));
  }
}

void RunConfig::load_file(const std::string& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    std::string echoed;
    try {
      echoed = nlohmann::json::parse(text).at("config_text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::invalid_argument, path + ": no echoed config (" + e.what() + ")");
    }
    load_text(echoed);
    return;
  }
  load_text(text);
}

std::string RunConfig::to_text() const {
  std::string out, section;
  for (const auto& f : fields()) {
    if (section != f.section) {
      section = f.section;
      out += (out.empty() ? "[" : "\n[") + section + "]\n";
    }
    out += std::string(f.key) + " = " + f.get(*this) + "\n";
  }
  return out;
}

RunConfig RunConfig::resolved() const {
  RunConfig c = *this;
  if (!(c.T1 > 0.0)) throw Error(ErrorCode::parameter, "photon.T1 must be > 0");
  if (c.T < 0.0) throw Error(ErrorCode::parameter, "grid.T must be > 0");
  c.T = window();
  if (c.n_z < 2 || c.n_t < 2) throw Error(ErrorCode::parameter, "grid needs at least 2 nodes per axis");
  if (c.init_centers.empty()) {
    c.init_centers = default_initial_centers(SimGrid(c.n_z, c.n_t, c.T), c.T1);
  }
  if (c.init_width <= 0.0) c.init_width = c.T1;
  if (!(c.d >= 0.0)) throw Error(ErrorCode::parameter, "scheme.d must be >= 0");
  if (c.n_traj < 1) throw Error(ErrorCode::parameter, "noise.n_traj must be >= 1");
  waveform_kind_from_string(c.waveform);
  lookup_scheme(c.scheme, c.d);
  c.ascent.validate();
  return c;
}

}  // namespace qdmem
