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
#ifndef QDMEM_QDMEM_H_
#define QDMEM_QDMEM_H_

/* C interface to libqdmem. Every function returning int returns one of the
 * QDM_* codes; on failure qdm_last_error() describes the problem. Strings
 * returned through char** are owned by the caller and released with qdm_free. */

#ifdef __cplusplus
extern "C" {
#endif

#define QDM_OK 0
#define QDM_ERR_INVALID_ARGUMENT 1
#define QDM_ERR_DOMAIN 2
#define QDM_ERR_CATALOG 3
#define QDM_ERR_PARAMETER 4
#define QDM_ERR_GRID_MISMATCH 5
#define QDM_ERR_SOLVER_INSTABILITY 6
#define QDM_ERR_UNDEFINED_RATIO 7
#define QDM_ERR_STAGNATION 8
#define QDM_ERR_IO 9
#define QDM_ERR_REPORT 10
#define QDM_ERR_NOT_CONVERGED 11
#define QDM_ERR_INTERNAL 99

typedef struct qdm_config qdm_config;
typedef struct qdm_result qdm_result;

const char* qdm_version(void);
/* Message of the last failure on the calling thread ("" if none). */
const char* qdm_last_error(void);
const char* qdm_error_name(int code);
void qdm_free(void* p);

int qdm_config_new(qdm_config** out);
void qdm_config_free(qdm_config* cfg);
/* key is "section.key" or a bare key that is unique across sections. */
int qdm_config_set(qdm_config* cfg, const char* key, const char* value);
int qdm_config_get(const qdm_config* cfg, const char* key, char** value);
/* Accepts sectioned key = value files and JSON result files (echoed config). */
int qdm_config_load_file(qdm_config* cfg, const char* path);
int qdm_config_load_text(qdm_config* cfg, const char* text);
/* resolved != 0 fills derived defaults and validates first. */
int qdm_config_text(const qdm_config* cfg, int resolved, char** text);

/* command: solve, optimize, sweep, table, noise-wander, noise-dephase,
 * fwm-check, catalog. workers >= 1 only changes speed, never results. */
int qdm_run(const qdm_config* cfg, const char* command, int workers, qdm_result** out);
/* QDM_OK, or QDM_ERR_NOT_CONVERGED when an ascent (or every sweep point) fell short. */
int qdm_result_status(const qdm_result* res);
const char* qdm_result_json(const qdm_result* res);
void qdm_result_free(qdm_result* res);

int qdm_catalog_csv(char** csv);
/* Renders a sweep/table JSON result against a reference id
 * (table-II, table-IV, table-VI, table-VIII, scenarios, none). */
int qdm_report(const char* result_json, const char* reference, char** text, char** csv,
               int* all_pass);

#ifdef __cplusplus
}
#endif

#endif /* QDMEM_QDMEM_H_ */
