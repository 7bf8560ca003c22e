#include "questsim/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "questsim/errors.hpp"

namespace qsim::output {

namespace {

using nlohmann::json;
using scenario::Cell;

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string csv_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return fmt_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return csv_escape(std::get<std::string>(c));
}

json json_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return json(*i);
    return json(std::get<std::string>(c));
}

std::string header(const scenario::Column& c) { return c.unit.empty() ? c.name : c.name + " [" + c.unit + "]"; }

void write_file(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + p.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for '" + p.string() + "'");
}

}  // namespace

std::string render_csv(const scenario::Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_escape(header(t.columns[i]));
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
        out += '\n';
    }
    return out;
}

std::string render_json(const scenario::Table& t) {
    json cols = json::array();
    for (const auto& c : t.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    json rows = json::array();
    for (const auto& r : t.rows) {
        json row = json::array();
        for (const auto& c : r) row.push_back(json_cell(c));
        rows.push_back(std::move(row));
    }
    return json{{"name", t.name}, {"columns", cols}, {"rows", rows}}.dump(1) + "\n";
}

std::string render_summary(const scenario::RunOutput& run) {
    json s = json::object();
    for (const auto& [k, v] : run.summary) s[k] = json_cell(v);
    return json{{"subcommand", run.subcommand}, {"checks_passed", run.checks_passed}, {"summary", s}}.dump(2) + "\n";
}

std::string render_manifest(const Manifest& m) {
    json files = json::array();
    for (const auto& f : m.files) files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    return json{{"tool_version", m.tool_version}, {"subcommand", m.subcommand}, {"config_hash", m.config_hash},
                {"seed", m.seed},                 {"format", m.format},         {"checks_passed", m.checks_passed},
                {"files", files}}
               .dump(2) +
           "\n";
}

Manifest parse_manifest(const std::string& text) {
    Manifest m;
    try {
        const json j = json::parse(text);
        m.tool_version = j.at("tool_version").get<std::string>();
        m.subcommand = j.at("subcommand").get<std::string>();
        m.config_hash = j.at("config_hash").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.format = j.at("format").get<std::string>();
        m.checks_passed = j.at("checks_passed").get<bool>();
        for (const auto& f : j.at("files"))
            m.files.push_back({f.at("name").get<std::string>(), f.at("sha256").get<std::string>(),
                               f.at("bytes").get<std::uint64_t>()});
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str());
}

Manifest write_run(const scenario::RunOutput& run, const config::ScenarioConfig& cfg, const std::string& dir,
                   Format format, double elapsed_seconds) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());

    Manifest m;
    m.tool_version = kToolVersion;
    m.subcommand = run.subcommand;
    m.config_hash = config::config_hash(cfg);
    m.seed = cfg.seed;
    m.format = format == Format::csv ? "csv" : "json";
    m.checks_passed = run.checks_passed;

    auto emit = [&](const std::string& name, const std::string& bytes) {
        write_file(fs::path(dir) / name, bytes);
        m.files.push_back({name, config::sha256_hex(bytes), bytes.size()});
    };
    for (const auto& t : run.tables)
        emit(t.name + (format == Format::csv ? ".csv" : ".json"),
             format == Format::csv ? render_csv(t) : render_json(t));
    emit("summary.json", render_summary(run));
    emit("config.txt", config::canonical_form(cfg));

    write_file(fs::path(dir) / "manifest.json", render_manifest(m));
    const json timing{{"subcommand", run.subcommand}, {"elapsed_seconds", elapsed_seconds}};
    write_file(fs::path(dir) / "timing.json", timing.dump(2) + "\n");
    return m;
}

}  // namespace qsim::output
