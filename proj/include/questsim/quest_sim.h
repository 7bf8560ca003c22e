#ifndef QUESTSIM_QUEST_SIM_H
#define QUESTSIM_QUEST_SIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(QS_BUILDING_LIBRARY)
#    define QS_API __declspec(dllexport)
#  else
#    define QS_API __declspec(dllimport)
#  endif
#else
#  define QS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qs_scenario qs_scenario;
typedef struct qs_report qs_report;

typedef enum qs_status {
    QS_OK = 0,
    QS_ERR_INVALID_ARGUMENT = 1,
    QS_ERR_PARSE = 2,
    QS_ERR_VALIDATION = 3,
    QS_ERR_IO = 4,
    QS_ERR_NUMERIC = 5,
    QS_ERR_TRUNCATION = 6,
    QS_ERR_SINGULAR = 7,
    QS_ERR_UNDEFINED = 8,
    QS_ERR_UNREACHABLE = 9,
    QS_ERR_CALIBRATION = 10,
    QS_ERR_INTERNAL = 11
} qs_status;

typedef enum qs_format { QS_FORMAT_CSV = 0, QS_FORMAT_JSON = 1 } qs_format;

QS_API const char* qs_version(void);
QS_API const char* qs_status_name(qs_status status);
/* 0 ok, 1 input/validation problems, 2 numeric failures. */
QS_API int qs_status_exit_code(qs_status status);

/* Message of the last failure on the calling thread; empty if none. */
QS_API const char* qs_last_error(void);
/* Line and column of the last parse error, 0 otherwise. */
QS_API int qs_last_error_line(void);
QS_API int qs_last_error_column(void);

QS_API qs_status qs_scenario_load(const char* path, qs_scenario** out);
QS_API qs_status qs_scenario_load_string(const char* text, qs_scenario** out);
QS_API qs_status qs_scenario_default(qs_scenario** out);
QS_API void qs_scenario_free(qs_scenario* scenario);
QS_API qs_status qs_scenario_set_seed(qs_scenario* scenario, uint64_t seed);
QS_API qs_status qs_scenario_seed(const qs_scenario* scenario, uint64_t* seed);
/* Writes the 64 hex digits plus a terminator; buffer must hold 65 bytes. */
QS_API qs_status qs_scenario_hash(const qs_scenario* scenario, char* buffer, size_t size);

QS_API size_t qs_subcommand_count(void);
/* Includes "run-all" as the last entry. */
QS_API const char* qs_subcommand_name(size_t index);
QS_API int qs_is_subcommand(const char* name);

QS_API qs_status qs_run(const qs_scenario* scenario, const char* subcommand, qs_report** out);
QS_API void qs_report_free(qs_report* report);
QS_API int qs_report_checks_passed(const qs_report* report);
QS_API size_t qs_report_table_count(const qs_report* report);
QS_API const char* qs_report_table_name(const qs_report* report, size_t table);
QS_API size_t qs_report_row_count(const qs_report* report, size_t table);
QS_API size_t qs_report_column_count(const qs_report* report, size_t table);
QS_API const char* qs_report_column_name(const qs_report* report, size_t table, size_t column);
/* Fails with QS_ERR_INVALID_ARGUMENT for text cells or out-of-range indices. */
QS_API qs_status qs_report_cell_double(const qs_report* report, size_t table, size_t row, size_t column, double* out);
/* Summary as JSON; owned by the report. */
QS_API const char* qs_report_summary_json(const qs_report* report);
/* Looks up a numeric summary value by key. */
QS_API qs_status qs_report_summary_double(const qs_report* report, const char* key, double* out);
/* Renders one table; release with qs_string_free. */
QS_API qs_status qs_report_render_table(const qs_report* report, size_t table, qs_format format, char** out);
QS_API void qs_string_free(char* s);

/* Writes tables, summary, manifest.json and timing.json into dir. */
QS_API qs_status qs_report_write(const qs_report* report, const char* dir, qs_format format, double elapsed_seconds);
/* Re-hashes every file listed in dir/manifest.json. QS_ERR_IO on any mismatch. */
QS_API qs_status qs_manifest_verify(const char* dir);

QS_API qs_status qs_time_dilation(double altitude_m, double zenith_rad, double* seconds);
QS_API qs_status qs_event_overlap(double delta_t, double coherence_time, double* xi);
QS_API qs_status qs_event_gamma(double xi, double alpha_re, double alpha_im, double* gamma_re, double* gamma_im);
QS_API qs_status qs_link_total_db(double atmospheric_db, double clipping_db, double pointing_db, double optics_db,
                                  double* total_db, double* transmission);

#ifdef __cplusplus
}
#endif

#endif
