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
#include "qdmem/qdmem.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "commands.hpp"
#include "qdmem/errors.hpp"
#include "qdmem/medium.hpp"
#include "qdmem/report.hpp"
#include "qdmem/run_config.hpp"
#include "qdmem/sweeps.hpp"

struct qdm_config {
  qdmem::RunConfig cfg;
};

struct qdm_result {
  std::string json;
  int status = 0;
};

namespace {

thread_local std::string g_last_error;

template <class F>
int guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return QDM_OK;
  } catch (const qdmem::Error& e) {
    g_last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QDM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QDM_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) throw qdmem::Error(qdmem::ErrorCode::invalid_argument, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* qdm_version(void) { return "1.0.0"; }

const char* qdm_last_error(void) { return g_last_error.c_str(); }

const char* qdm_error_name(int code) {
  switch (code) {
    case QDM_OK: return "ok";
    case QDM_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case QDM_ERR_DOMAIN: return "domain";
    case QDM_ERR_CATALOG: return "catalog";
    case QDM_ERR_PARAMETER: return "parameter";
    case QDM_ERR_GRID_MISMATCH: return "grid_mismatch";
    case QDM_ERR_SOLVER_INSTABILITY: return "solver_instability";
    case QDM_ERR_UNDEFINED_RATIO: return "undefined_ratio";
    case QDM_ERR_STAGNATION: return "stagnation";
    case QDM_ERR_IO: return "io";
    case QDM_ERR_REPORT: return "report";
    case QDM_ERR_NOT_CONVERGED: return "not_converged";
    case QDM_ERR_INTERNAL: return "internal";
    default: return "unknown";
  }
}

void qdm_free(void* p) { std::free(p); }

int qdm_config_new(qdm_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new qdm_config();
  });
}

void qdm_config_free(qdm_config* cfg) { delete cfg; }

int qdm_config_set(qdm_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg, "cfg");
    need(key, "key");
    need(value, "value");
    cfg->cfg.set(key, value);
  });
}

int qdm_config_get(const qdm_config* cfg, const char* key, char** value) {
  return guarded([&] {
    need(cfg, "cfg");
    need(key, "key");
    need(value, "value");
    *value = dup(cfg->cfg.get(key));
  });
}

int qdm_config_load_file(qdm_config* cfg, const char* path) {
  return guarded([&] {
    need(cfg, "cfg");
    need(path, "path");
    cfg->cfg.load_file(path);
  });
}

int qdm_config_load_text(qdm_config* cfg, const char* text) {
  return guarded([&] {
    need(cfg, "cfg");
    need(text, "text");
    cfg->cfg.load_text(text);
  });
}

int qdm_config_text(const qdm_config* cfg, int resolved, char** text) {
  return guarded([&] {
    need(cfg, "cfg");
    need(text, "text");
    *text = dup(resolved ? cfg->cfg.resolved().to_text() : cfg->cfg.to_text());
  });
}

int qdm_run(const qdm_config* cfg, const char* command, int workers, qdm_result** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(command, "command");
    need(out, "out");
    *out = nullptr;
    auto r = qdmem::run_command(command, cfg->cfg, workers);
    *out = new qdm_result{std::move(r.json), r.status};
  });
}

int qdm_result_status(const qdm_result* res) { return res ? res->status : QDM_ERR_INVALID_ARGUMENT; }

const char* qdm_result_json(const qdm_result* res) { return res ? res->json.c_str() : ""; }

void qdm_result_free(qdm_result* res) { delete res; }

int qdm_catalog_csv(char** csv) {
  return guarded([&] {
    need(csv, "csv");
    *csv = dup(qdmem::Rb87Catalog::instance().export_csv());
  });
}

int qdm_report(const char* result_json, const char* reference, char** text, char** csv,
               int* all_pass) {
  return guarded([&] {
    need(result_json, "result_json");
    need(reference, "reference");
    const auto r = qdmem::render_report(qdmem::sweep_from_json(result_json), reference);
    if (text) *text = dup(r.text);
    if (csv) *csv = dup(r.csv);
    if (all_pass) *all_pass = r.all_pass ? 1 : 0;
  });
}

}  // extern "C"
