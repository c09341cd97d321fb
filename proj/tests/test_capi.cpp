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
#include <cstdlib>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "qdmem/qdmem.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  qdm_free(s);
  return out;
}

}  // namespace

TEST_CASE("c api config handles") {
  qdm_config* cfg = nullptr;
  REQUIRE(qdm_config_new(&cfg) == QDM_OK);
  CHECK(qdm_config_set(cfg, "scheme.d", "12.5") == QDM_OK);
  char* v = nullptr;
  REQUIRE(qdm_config_get(cfg, "d", &v) == QDM_OK);
  CHECK(take(v) == "12.5");
  CHECK(qdm_config_set(cfg, "bogus.key", "1") == QDM_ERR_INVALID_ARGUMENT);
  CHECK(std::string(qdm_last_error()).find("bogus") != std::string::npos);
  CHECK(qdm_config_set(nullptr, "d", "1") == QDM_ERR_INVALID_ARGUMENT);
  CHECK(qdm_config_load_file(cfg, "/nonexistent/run.ini") == QDM_ERR_IO);
  CHECK(qdm_config_set(cfg, "scheme.label", "no-such-scheme") == QDM_OK);
  char* text = nullptr;
  CHECK(qdm_config_text(cfg, 1, &text) == QDM_ERR_CATALOG);
  CHECK(text == nullptr);
  REQUIRE(qdm_config_text(cfg, 0, &text) == QDM_OK);
  const std::string t = take(text);
  CHECK(t.find("label = no-such-scheme") != std::string::npos);
  qdm_config* other = nullptr;
  REQUIRE(qdm_config_new(&other) == QDM_OK);
  REQUIRE(qdm_config_load_text(other, t.c_str()) == QDM_OK);
  REQUIRE(qdm_config_text(other, 0, &text) == QDM_OK);
  CHECK(take(text) == t);
  qdm_config_free(other);
  qdm_config_free(cfg);
  CHECK(std::string(qdm_error_name(QDM_ERR_STAGNATION)) == "stagnation");
  CHECK(std::string(qdm_version()).size() > 0);
}

TEST_CASE("c api runs commands") {
  qdm_config* cfg = nullptr;
  REQUIRE(qdm_config_new(&cfg) == QDM_OK);
  qdm_config_set(cfg, "n_z", "100");
  qdm_config_set(cfg, "n_t", "200");
  qdm_config_set(cfg, "label", "ideal-3L");
  qdm_result* res = nullptr;
  REQUIRE(qdm_run(cfg, "solve", 1, &res) == QDM_OK);
  CHECK(qdm_result_status(res) == QDM_OK);
  const auto j = nlohmann::json::parse(qdm_result_json(res));
  CHECK(j["command"] == "solve");
  CHECK(j["result"]["eta_s"].get<double>() < 1e-12);
  CHECK(j["result"]["balance_defect"].get<double>() < 5e-3);
  qdm_result_free(res);
  res = nullptr;
  CHECK(qdm_run(cfg, "dance", 1, &res) == QDM_ERR_INVALID_ARGUMENT);
  CHECK(res == nullptr);
  qdm_config_free(cfg);

  char* csv = nullptr;
  REQUIRE(qdm_catalog_csv(&csv) == QDM_OK);
  const std::string c = take(csv);
  CHECK(c.find("D2-clock-config4") != std::string::npos);
}

TEST_CASE("c api report") {
  const char* result = R"({"format_version":"1.0","kind":"config-table","table":"scenarios",
    "config_text":"[grid]\nn_z = 1000\nn_t = 1000\n","records":[]})";
  char* text = nullptr;
  char* csv = nullptr;
  int pass = 1;
  CHECK(qdm_report(result, "scenarios", &text, &csv, &pass) != QDM_OK);
  CHECK(qdm_report("{", "none", &text, &csv, &pass) != QDM_OK);
  CHECK(std::string(qdm_last_error()).size() > 0);
}
