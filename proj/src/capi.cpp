#include "questsim/quest_sim.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "questsim/config.hpp"
#include "questsim/errors.hpp"
#include "questsim/event_channel.hpp"
#include "questsim/link_budget.hpp"
#include "questsim/output.hpp"
#include "questsim/scenario.hpp"
#include "questsim/spacetime.hpp"

struct qs_scenario {
    qsim::config::ScenarioConfig cfg;
};

struct qs_report {
    qsim::config::ScenarioConfig cfg;
    qsim::scenario::RunOutput run;
    std::string summary;
    std::vector<std::vector<std::string>> headers;
};

namespace {

thread_local std::string g_error;
thread_local int g_line = 0;
thread_local int g_column = 0;

qs_status map_code(qsim::ErrorCode c) {
    using qsim::ErrorCode;
    switch (c) {
        case ErrorCode::invalid_argument: return QS_ERR_INVALID_ARGUMENT;
        case ErrorCode::truncation_risk: return QS_ERR_TRUNCATION;
        case ErrorCode::singular_parameter: return QS_ERR_SINGULAR;
        case ErrorCode::numeric: return QS_ERR_NUMERIC;
        case ErrorCode::validation: return QS_ERR_VALIDATION;
        case ErrorCode::parse: return QS_ERR_PARSE;
        case ErrorCode::unreachable_target: return QS_ERR_UNREACHABLE;
        case ErrorCode::undefined_estimate: return QS_ERR_UNDEFINED;
        case ErrorCode::calibration: return QS_ERR_CALIBRATION;
        case ErrorCode::io: return QS_ERR_IO;
    }
    return QS_ERR_INTERNAL;
}

qs_status fail(qs_status s, std::string msg) {
    g_error = std::move(msg);
    return s;
}

template <class F>
qs_status guarded(F&& f) {
    g_error.clear();
    g_line = g_column = 0;
    try {
        f();
        return QS_OK;
    } catch (const qsim::ParseError& e) {
        g_line = e.line();
        g_column = e.column();
        return fail(QS_ERR_PARSE, e.what());
    } catch (const qsim::Error& e) {
        return fail(map_code(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(QS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(QS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(QS_ERR_INTERNAL, "unknown failure");
    }
}

qs_status null_arg(const char* what) { return fail(QS_ERR_INVALID_ARGUMENT, std::string(what) + " must not be null"); }

const qsim::scenario::Table* table_at(const qs_report* r, size_t i) {
    if (!r || i >= r->run.tables.size()) return nullptr;
    return &r->run.tables[i];
}

}  // namespace

extern "C" {

const char* qs_version(void) { return qsim::output::kToolVersion; }

const char* qs_status_name(qs_status s) {
    switch (s) {
        case QS_OK: return "ok";
        case QS_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case QS_ERR_PARSE: return "parse";
        case QS_ERR_VALIDATION: return "validation";
        case QS_ERR_IO: return "io";
        case QS_ERR_NUMERIC: return "numeric";
        case QS_ERR_TRUNCATION: return "truncation-risk";
        case QS_ERR_SINGULAR: return "singular-parameter";
        case QS_ERR_UNDEFINED: return "undefined-estimate";
        case QS_ERR_UNREACHABLE: return "unreachable-target";
        case QS_ERR_CALIBRATION: return "calibration";
        case QS_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

int qs_status_exit_code(qs_status s) {
    switch (s) {
        case QS_OK: return 0;
        case QS_ERR_INVALID_ARGUMENT:
        case QS_ERR_PARSE:
        case QS_ERR_VALIDATION:
        case QS_ERR_IO: return 1;
        default: return 2;
    }
}

const char* qs_last_error(void) { return g_error.c_str(); }
int qs_last_error_line(void) { return g_line; }
int qs_last_error_column(void) { return g_column; }

qs_status qs_scenario_load(const char* path, qs_scenario** out) {
    if (!path) return null_arg("path");
    if (!out) return null_arg("out");
    *out = nullptr;
    return guarded([&] { *out = new qs_scenario{qsim::config::load_config(path)}; });
}

qs_status qs_scenario_load_string(const char* text, qs_scenario** out) {
    if (!text) return null_arg("text");
    if (!out) return null_arg("out");
    *out = nullptr;
    return guarded([&] { *out = new qs_scenario{qsim::config::load_config_string(text)}; });
}

qs_status qs_scenario_default(qs_scenario** out) {
    if (!out) return null_arg("out");
    *out = nullptr;
    return guarded([&] { *out = new qs_scenario{}; });
}

void qs_scenario_free(qs_scenario* s) { delete s; }

qs_status qs_scenario_set_seed(qs_scenario* s, uint64_t seed) {
    if (!s) return null_arg("scenario");
    s->cfg.seed = seed;
    return QS_OK;
}

qs_status qs_scenario_seed(const qs_scenario* s, uint64_t* seed) {
    if (!s) return null_arg("scenario");
    if (!seed) return null_arg("seed");
    *seed = s->cfg.seed;
    return QS_OK;
}

qs_status qs_scenario_hash(const qs_scenario* s, char* buf, size_t size) {
    if (!s) return null_arg("scenario");
    if (!buf) return null_arg("buffer");
    if (size < 65) return fail(QS_ERR_INVALID_ARGUMENT, "hash buffer needs 65 bytes");
    return guarded([&] {
        const std::string h = qsim::config::config_hash(s->cfg);
        std::memcpy(buf, h.c_str(), h.size() + 1);
    });
}

size_t qs_subcommand_count(void) { return qsim::scenario::subcommands().size() + 1; }

const char* qs_subcommand_name(size_t i) {
    const auto& names = qsim::scenario::subcommands();
    if (i < names.size()) return names[i].c_str();
    if (i == names.size()) return "run-all";
    return nullptr;
}

int qs_is_subcommand(const char* name) { return name && qsim::scenario::is_subcommand(name) ? 1 : 0; }

qs_status qs_run(const qs_scenario* s, const char* sub, qs_report** out) {
    if (!s) return null_arg("scenario");
    if (!sub) return null_arg("subcommand");
    if (!out) return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        auto* r = new qs_report{s->cfg, qsim::scenario::run_subcommand(sub, s->cfg), {}, {}};
        r->summary = qsim::output::render_summary(r->run);
        for (const auto& t : r->run.tables) {
            std::vector<std::string> h;
            for (const auto& c : t.columns) h.push_back(c.name);
            r->headers.push_back(std::move(h));
        }
        *out = r;
    });
}

void qs_report_free(qs_report* r) { delete r; }

int qs_report_checks_passed(const qs_report* r) { return r && r->run.checks_passed ? 1 : 0; }

size_t qs_report_table_count(const qs_report* r) { return r ? r->run.tables.size() : 0; }

const char* qs_report_table_name(const qs_report* r, size_t i) {
    const auto* t = table_at(r, i);
    return t ? t->name.c_str() : nullptr;
}

size_t qs_report_row_count(const qs_report* r, size_t i) {
    const auto* t = table_at(r, i);
    return t ? t->rows.size() : 0;
}

size_t qs_report_column_count(const qs_report* r, size_t i) {
    const auto* t = table_at(r, i);
    return t ? t->columns.size() : 0;
}

const char* qs_report_column_name(const qs_report* r, size_t i, size_t c) {
    if (!table_at(r, i) || c >= r->headers[i].size()) return nullptr;
    return r->headers[i][c].c_str();
}

qs_status qs_report_cell_double(const qs_report* r, size_t i, size_t row, size_t col, double* out) {
    if (!out) return null_arg("out");
    const auto* t = table_at(r, i);
    if (!t || row >= t->rows.size() || col >= t->columns.size())
        return fail(QS_ERR_INVALID_ARGUMENT, "cell index out of range");
    const auto& cell = t->rows[row][col];
    if (const auto* d = std::get_if<double>(&cell)) {
        *out = *d;
        return QS_OK;
    }
    if (const auto* n = std::get_if<std::int64_t>(&cell)) {
        *out = static_cast<double>(*n);
        return QS_OK;
    }
    return fail(QS_ERR_INVALID_ARGUMENT, "cell holds text");
}

const char* qs_report_summary_json(const qs_report* r) { return r ? r->summary.c_str() : nullptr; }

qs_status qs_report_summary_double(const qs_report* r, const char* key, double* out) {
    if (!r) return null_arg("report");
    if (!key) return null_arg("key");
    if (!out) return null_arg("out");
    for (const auto& [k, v] : r->run.summary) {
        if (k != key) continue;
        if (const auto* d = std::get_if<double>(&v)) {
            *out = *d;
            return QS_OK;
        }
        if (const auto* n = std::get_if<std::int64_t>(&v)) {
            *out = static_cast<double>(*n);
            return QS_OK;
        }
        return fail(QS_ERR_INVALID_ARGUMENT, std::string("summary entry '") + key + "' is text");
    }
    return fail(QS_ERR_INVALID_ARGUMENT, std::string("no summary entry '") + key + "'");
}

qs_status qs_report_render_table(const qs_report* r, size_t i, qs_format format, char** out) {
    if (!out) return null_arg("out");
    *out = nullptr;
    const auto* t = table_at(r, i);
    if (!t) return fail(QS_ERR_INVALID_ARGUMENT, "table index out of range");
    return guarded([&] {
        const std::string s = format == QS_FORMAT_JSON ? qsim::output::render_json(*t) : qsim::output::render_csv(*t);
        char* buf = static_cast<char*>(std::malloc(s.size() + 1));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, s.c_str(), s.size() + 1);
        *out = buf;
    });
}

void qs_string_free(char* s) { std::free(s); }

qs_status qs_report_write(const qs_report* r, const char* dir, qs_format format, double elapsed) {
    if (!r) return null_arg("report");
    if (!dir) return null_arg("dir");
    return guarded([&] {
        qsim::output::write_run(r->run, r->cfg, dir,
                                format == QS_FORMAT_JSON ? qsim::output::Format::json : qsim::output::Format::csv,
                                elapsed);
    });
}

qs_status qs_manifest_verify(const char* dir) {
    if (!dir) return null_arg("dir");
    return guarded([&] {
        namespace fs = std::filesystem;
        const auto m = qsim::output::read_manifest((fs::path(dir) / "manifest.json").string());
        for (const auto& f : m.files) {
            std::ifstream in(fs::path(dir) / f.name, std::ios::binary);
            if (!in) throw qsim::IoError("missing output '" + f.name + "'");
            std::ostringstream ss;
            ss << in.rdbuf();
            if (qsim::config::sha256_hex(ss.str()) != f.sha256)
                throw qsim::IoError("checksum mismatch for '" + f.name + "'");
        }
    });
}

qs_status qs_time_dilation(double altitude_m, double zenith_rad, double* seconds) {
    if (!seconds) return null_arg("seconds");
    return guarded([&] {
        qsim::spacetime::LinkGeometry g;
        g.altitude_m = altitude_m;
        g.zenith_rad = zenith_rad;
        *seconds = qsim::spacetime::time_dilation(g);
    });
}

qs_status qs_event_overlap(double delta_t, double coherence_time, double* xi) {
    if (!xi) return null_arg("xi");
    return guarded([&] { *xi = qsim::spacetime::event_overlap(delta_t, coherence_time); });
}

qs_status qs_event_gamma(double xi, double are, double aim, double* gre, double* gim) {
    if (!gre || !gim) return null_arg("gamma");
    return guarded([&] {
        const auto g = qsim::channel::event_gamma(xi, {are, aim});
        *gre = g.real();
        *gim = g.imag();
    });
}

qs_status qs_link_total_db(double atm, double clip, double point, double optics, double* total, double* transmission) {
    if (!total || !transmission) return null_arg("output");
    return guarded([&] {
        const qsim::link::LossComponents c{atm, clip, point, optics};
        for (double v : {atm, clip, point, optics})
            if (!(v >= 0.0 && v <= 80.0)) throw qsim::InvalidArgument("loss components must lie in [0, 80] dB");
        *total = c.total_db();
        *transmission = c.transmission();
    });
}

}  // extern "C"
