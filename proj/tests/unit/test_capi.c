#include <math.h>
#include <stdio.h>
#include <string.h>

#include "questsim/quest_sim.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
    do {                                                               \
        if (!(cond)) {                                                 \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                \
        }                                                              \
    } while (0)

int main(void) {
    qs_scenario* sc = NULL;
    EXPECT(qs_scenario_load(QS_SOURCE_DIR "/configs/worst_case.yaml", &sc) == QS_OK);
    EXPECT(sc != NULL);

    char hash[65];
    EXPECT(qs_scenario_hash(sc, hash, sizeof hash) == QS_OK);
    EXPECT(strlen(hash) == 64);
    EXPECT(qs_scenario_hash(sc, hash, 10) == QS_ERR_INVALID_ARGUMENT);

    qs_scenario* def = NULL;
    EXPECT(qs_scenario_default(&def) == QS_OK);
    char hash2[65];
    qs_scenario_hash(def, hash2, sizeof hash2);
    EXPECT(strcmp(hash, hash2) == 0);
    EXPECT(qs_scenario_set_seed(def, 5) == QS_OK);
    uint64_t seed = 0;
    qs_scenario_seed(def, &seed);
    EXPECT(seed == 5);
    qs_scenario_hash(def, hash2, sizeof hash2);
    EXPECT(strcmp(hash, hash2) != 0);
    qs_scenario_free(def);

    qs_report* rep = NULL;
    EXPECT(qs_run(sc, "link-budget", &rep) == QS_OK);
    EXPECT(qs_report_checks_passed(rep) == 1);
    EXPECT(qs_report_table_count(rep) == 3);
    EXPECT(strcmp(qs_report_table_name(rep, 0), "link_budget") == 0);
    EXPECT(strcmp(qs_report_column_name(rep, 0, 9), "total") == 0);
    double total = 0.0;
    EXPECT(qs_report_cell_double(rep, 0, 0, 9, &total) == QS_OK);
    EXPECT(fabs(total - 46.0) <= 0.5);
    EXPECT(qs_report_cell_double(rep, 0, 0, 0, &total) == QS_ERR_INVALID_ARGUMENT);
    EXPECT(qs_report_cell_double(rep, 9, 0, 0, &total) == QS_ERR_INVALID_ARGUMENT);
    double opt = 0.0;
    EXPECT(qs_report_summary_double(rep, "optimal_tx_diameter_cm", &opt) == QS_OK);
    EXPECT(opt >= 8.0 && opt <= 20.0);
    EXPECT(qs_report_summary_double(rep, "nope", &opt) == QS_ERR_INVALID_ARGUMENT);
    EXPECT(strstr(qs_report_summary_json(rep), "worst_total_db") != NULL);

    char* csv = NULL;
    EXPECT(qs_report_render_table(rep, 0, QS_FORMAT_CSV, &csv) == QS_OK);
    EXPECT(csv && strncmp(csv, "case,", 5) == 0);
    qs_string_free(csv);

    EXPECT(qs_report_write(rep, QS_BINARY_DIR "/capi_out", QS_FORMAT_JSON, 0.0) == QS_OK);
    EXPECT(qs_manifest_verify(QS_BINARY_DIR "/capi_out") == QS_OK);
    EXPECT(qs_manifest_verify(QS_BINARY_DIR "/no_such_dir") == QS_ERR_IO);
    qs_report_free(rep);

    EXPECT(qs_run(sc, "fly", &rep) == QS_ERR_INVALID_ARGUMENT);
    EXPECT(rep == NULL);
    EXPECT(strstr(qs_last_error(), "fly") != NULL);
    qs_scenario_free(sc);

    EXPECT(qs_scenario_load_string("schedule: {epps: 0.39}", &sc) == QS_ERR_VALIDATION);
    EXPECT(strstr(qs_last_error(), "schedule") != NULL);
    EXPECT(qs_scenario_load_string("a: [1,\n", &sc) == QS_ERR_PARSE);
    EXPECT(qs_last_error_line() >= 1);
    EXPECT(qs_scenario_load("/nonexistent.yaml", &sc) == QS_ERR_IO);
    EXPECT(qs_scenario_load(NULL, &sc) == QS_ERR_INVALID_ARGUMENT);

    EXPECT(qs_status_exit_code(QS_OK) == 0);
    EXPECT(qs_status_exit_code(QS_ERR_VALIDATION) == 1);
    EXPECT(qs_status_exit_code(QS_ERR_PARSE) == 1);
    EXPECT(qs_status_exit_code(QS_ERR_NUMERIC) == 2);
    EXPECT(qs_status_exit_code(QS_ERR_TRUNCATION) == 2);

    double dt = 0.0, xi = 0.0, gr = 0.0, gi = 0.0, tot = 0.0, tr = 0.0;
    EXPECT(qs_time_dilation(400e3, 0.0, &dt) == QS_OK);
    EXPECT(fabs(dt - 9.00815e-13) < 1e-17);
    EXPECT(qs_event_overlap(dt, 0.8e-12, &xi) == QS_OK);
    EXPECT(fabs(xi - 0.530487) < 1e-5);
    EXPECT(qs_event_gamma(1.0, 0.3, 0.0, &gr, &gi) == QS_ERR_SINGULAR);
    EXPECT(qs_status_exit_code(QS_ERR_SINGULAR) == 2);
    EXPECT(qs_event_gamma(0.5, 0.3, 0.0, &gr, &gi) == QS_OK);
    EXPECT(qs_link_total_db(4.5, 28, 6, 7.5, &tot, &tr) == QS_OK);
    EXPECT(fabs(tot - 46.0) < 1e-12 && fabs(tr - pow(10.0, -4.6)) < 1e-15);

    size_t n = qs_subcommand_count();
    EXPECT(n == 9);
    EXPECT(strcmp(qs_subcommand_name(n - 1), "run-all") == 0);
    EXPECT(qs_subcommand_name(n) == NULL);
    EXPECT(qs_is_subcommand("pass-sim") == 1);

    if (failures) fprintf(stderr, "%d C API expectations failed\n", failures);
    else printf("C API: all expectations met\n");
    return failures ? 1 : 0;
}
