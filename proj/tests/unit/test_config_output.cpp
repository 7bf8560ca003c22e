#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "questsim/config.hpp"
#include "questsim/errors.hpp"
#include "questsim/output.hpp"
#include "questsim/scenario.hpp"

using namespace qsim;
using namespace qsim::config;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> issues_of(const std::string& yaml) {
    try {
        load_config_string(yaml);
    } catch (const ValidationError& e) {
        return e.issues();
    }
    return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& s) {
    for (const auto& x : v)
        if (x.find(s) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("shipped config matches the built-in defaults") {
    const auto c = load_config(QS_SOURCE_DIR "/configs/worst_case.yaml");
    CHECK(config_hash(c) == config_hash(ScenarioConfig{}));
    CHECK(config_hash(c) == config_hash(load_config(QS_SOURCE_DIR "/configs/worst_case.yaml")));
    CHECK(config_hash(c).size() == 64);
    CHECK(validate(c).empty());
}

TEST_CASE("empty document gives defaults; seed changes the hash") {
    CHECK(config_hash(load_config_string("")) == config_hash(ScenarioConfig{}));
    CHECK(config_hash(load_config_string("seed: 7")) != config_hash(ScenarioConfig{}));
}

TEST_CASE("sha256 of a known string") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("schedule must sum to one") {
    const auto v = issues_of("schedule: {epps: 0.39}");
    CHECK(mentions(v, "schedule"));
    CHECK(mentions(v, "0.99"));
}

TEST_CASE("negative scintillation index is rejected") {
    CHECK(mentions(issues_of("turbulence: {scintillation_index: -0.1}"), "turbulence.scintillation_index"));
}

TEST_CASE("every violation is reported at once") {
    const auto v = issues_of(
        "turbulence: {scintillation_index: -0.1}\n"
        "geometry: {altitude_km: 50, bogus: 1}\n"
        "link: {obscuration: 0.9}\n"
        "detector: {apd_model: XYZ}\n"
        "extra: 3\n");
    CHECK(v.size() >= 6);
    CHECK(mentions(v, "turbulence.scintillation_index"));
    CHECK(mentions(v, "geometry.altitude_km"));
    CHECK(mentions(v, "geometry.bogus: unknown key"));
    CHECK(mentions(v, "link.obscuration"));
    CHECK(mentions(v, "detector.apd_model"));
    CHECK(mentions(v, "extra: unknown key"));
}

TEST_CASE("type and enum errors") {
    CHECK(mentions(issues_of("pass: {passes: many}"), "pass.passes"));
    CHECK(mentions(issues_of("channel: {spdc_model: third_order}"), "first_order|two_mode_squeezed"));
    CHECK(mentions(issues_of("geometry: 5"), "expected a mapping"));
}

TEST_CASE("parse errors carry line and column") {
    try {
        load_config_string("seed: 1\ngeometry:\n  altitude_km: [1, 2\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() >= 3);
        CHECK(e.column() >= 1);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/x.yaml"), IoError);
}

TEST_CASE("derived views") {
    const ScenarioConfig c;
    CHECK(c.rate_model().link_transmission == doctest::Approx(std::pow(10.0, -4.6)));
    CHECK(c.sensitivity_scenario().baseline_df == doctest::Approx(0.530487).epsilon(1e-5));
    CHECK(c.beam().tx_diameter == doctest::Approx(0.13));
    CHECK(c.pass_config().max_zenith == doctest::Approx(37.0 * std::numbers::pi / 180.0));
    CHECK(c.curves.altitude_km.values().size() == 81);
    CHECK(c.curves.altitude_km.values().back() == doctest::Approx(1000.0));
}

TEST_CASE("csv rendering") {
    scenario::Table t{"t", {{"x", "km"}, {"label", ""}, {"n", "1"}}};
    t.add_row({1.0 / 3.0, std::string("a,b"), std::int64_t{7}});
    CHECK(output::render_csv(t) == "x [km],label,n [1]\n0.333333333333,\"a,b\",7\n");
    CHECK_THROWS_AS(t.add_row({1.0}), InvalidArgument);
    CHECK(output::render_json(t).find("\"unit\": \"km\"") != std::string::npos);
}

TEST_CASE("manifest round trip and determinism") {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "questsim_unit_out";
    fs::remove_all(base);
    ScenarioConfig c;
    const auto run = scenario::run_subcommand("link-budget", c);
    const auto m1 = output::write_run(run, c, (base / "a").string(), output::Format::csv, 0.1);
    const auto m2 = output::write_run(run, c, (base / "b").string(), output::Format::csv, 0.2);
    CHECK(output::render_manifest(m1) == output::render_manifest(m2));
    const auto back = output::read_manifest((base / "a" / "manifest.json").string());
    CHECK(output::render_manifest(back) == output::render_manifest(m1));
    CHECK(back.config_hash == config_hash(c));
    for (const auto& f : back.files) CHECK(sha256_hex(slurp(base / "a" / f.name)) == f.sha256);
    CHECK(slurp(base / "a" / "manifest.json") == slurp(base / "b" / "manifest.json"));
    CHECK(slurp(base / "a" / "timing.json") != slurp(base / "b" / "timing.json"));
    const std::string csv = slurp(base / "a" / "link_budget.csv");
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv.rfind("case,zenith [deg],", 0) == 0);
    fs::remove_all(base);
}

TEST_CASE("scenario dispatch") {
    CHECK(scenario::is_subcommand("run-all"));
    CHECK_FALSE(scenario::is_subcommand("fly"));
    CHECK_THROWS_AS(scenario::run_subcommand("fly", ScenarioConfig{}), InvalidArgument);
    const auto s = scenario::run_subcommand("sensitivity", ScenarioConfig{});
    CHECK(s.tables.front().rows.size() == 4 * 39);
}
