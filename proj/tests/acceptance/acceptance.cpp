#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "questsim/config.hpp"
#include "questsim/counting_stats.hpp"
#include "questsim/detector_aging.hpp"
#include "questsim/event_channel.hpp"
#include "questsim/link_budget.hpp"
#include "questsim/output.hpp"
#include "questsim/scenario.hpp"
#include "questsim/spacetime.hpp"

using namespace qsim;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = budget_s <= 0.0 || dt < budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("CRITERION %d %s: %s | %s | %.3f s", id, title, pass ? "PASS" : "FAIL", o.detail.c_str(), dt);
    if (budget_s > 0.0) std::printf(" (budget %.0f s)", budget_s);
    std::printf("\n");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }
double sample_var(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
}

double df(double h_km, double zen_deg, double dt_ps) {
    spacetime::LinkGeometry g;
    g.altitude_m = h_km * 1e3;
    g.zenith_rad = zen_deg * kDeg;
    return spacetime::decoherence(g, dt_ps * 1e-12).d_f;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    criterion(1, "channel oracle", 10.0, [] {
        const auto rows = channel::verify_grid({0.01, 0.05, 0.1}, {0.1, 0.3, 0.5, 0.7, 0.9}, {0.5, 1.0},
                                               fock::SpdcModel::two_mode_squeezed);
        double ratio = 0, drift = 0;
        for (const auto& r : rows) {
            ratio = std::max(ratio, r.deviation / r.bound);
            drift = std::max(drift, r.singles_drift);
        }
        return Outcome{rows.size() == 60 && ratio <= 1.0 && drift <= 1e-12,
                       fmt("%.0f grid points, max deviation/bound %.3f, max singles drift %.2e", rows.size(), ratio,
                           drift)};
    });

    criterion(2, "coherent-state preservation", 30.0, [] {
        double worst = 1.0;
        int n = 0;
        for (double a : {0.0, 0.25, 0.5})
            for (double b : {0.0, 0.25, 0.5})
                for (double pa : {0.0, 2.1})
                    for (double pb : {0.0, -1.3})
                        for (double xi : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
                            channel::ChannelInput in;
                            in.kind = channel::InputKind::coherent;
                            in.alpha = std::polar(a, pa);
                            in.beta = std::polar(b, pb);
                            in.cutoff = 8;
                            const auto r = channel::run_event_channel(in, {xi, 1.0, 1.0});
                            worst = std::min(worst, fock::fidelity(r.reduced,
                                                                   fock::coherent_pair_state(in.alpha, in.beta, 8)));
                            ++n;
                        }
        return Outcome{worst >= 1.0 - 1e-6, fmt("%.0f cases, min fidelity 1 - %.2e", n, 1.0 - worst)};
    });

    criterion(3, "polarization case", 60.0, [] {
        double ratio = 0, cross = 0;
        for (double chi : {0.01, 0.05, 0.1})
            for (double xi : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                channel::ChannelInput in;
                in.kind = channel::InputKind::polarization_spdc;
                in.chi = chi;
                const auto r = channel::run_event_channel(in, {xi, 1.0, 1.0});
                ratio = std::max(ratio, std::abs(r.same_polarization - xi * chi * chi) / (5 * std::pow(chi, 4)));
                cross = std::max(cross, r.cross_polarization / (2 * std::pow(chi, 4)));
            }
        return Outcome{ratio <= 1.0 && cross <= 1.0,
                       fmt("same-pol deviation/bound %.3f, cross-pol/bound %.3e", ratio, cross)};
    });

    criterion(4, "phase-delay invariance", 0.0, [] {
        stats::Rng rng = stats::make_stream(20180101, 77);
        std::uniform_real_distribution<double> U(0.0, 2 * std::numbers::pi);
        channel::ChannelInput in;
        in.chi = 0.1;
        in.model = fock::SpdcModel::two_mode_squeezed;
        const auto r = channel::run_event_channel(in, {0.5, 0.9, 0.7});
        double worst = 0;
        for (int i = 0; i < 20; ++i) worst = std::max(worst, channel::phase_delay_invariance_check(r.reduced, U(rng)));
        return Outcome{worst <= 1e-12, fmt("20 random delays, max deviation %.2e", worst)};
    });

    criterion(5, "relativity anchors", 1.0, [] {
        const double a = df(400, 0, 0.8) - df(431, 0, 0.8);
        const double b = df(400, 0, 0.8) - df(415, 0, 0.8);
        const double c = df(400, 0, 0.864) - df(400, 0, 0.8);
        const double d = df(400, 0, 0.8) - df(400, 22.5, 0.8);
        const bool ok = std::abs(a - 0.050) <= 0.007 && std::abs(b - 0.025) <= 0.005 && std::abs(c - 0.050) <= 0.007 &&
                        std::abs(d - 0.051) <= 0.005;
        return Outcome{ok, fmt("altitude +31 km %.4f, +15 km %.4f, dt +0.064 ps %.4f, zenith 22.5 deg %.4f", a, b, c, d)};
    });

    criterion(6, "link budget", 1.0, [] {
        const config::ScenarioConfig cfg;
        const auto l = link::evaluate_link(cfg.beam(), 400e3, 37 * kDeg);
        const double total = l.losses.total_db();
        const double optics = l.losses.optics_db;
        const double clip = l.losses.clipping_db;
        const double d = link::optimal_tx_diameter(0.15, l.range, 830e-9).diameter;
        const bool ok = std::abs(total - 46) <= 0.5 && std::abs(optics - 7.5) <= 0.1 && clip >= 26 && clip <= 28 &&
                        d >= 0.08 && d <= 0.20;
        return Outcome{ok, fmt("total %.2f dB, optics %.3f dB, clipping %.2f dB (obscuration 0.35), optimum D %.1f cm",
                               total, optics, clip, d * 100)};
    });

    criterion(7, "statistics", 120.0, [] {
        const double si = 0.05;
        stats::Rng rng = stats::make_stream(20180101, 500);
        std::vector<double> v(1000000);
        for (auto& x : v) x = stats::lognormal_factor(si, rng);
        const double m = mean(v), var = sample_var(v);
        const bool lnd = std::abs(m - 1) <= 0.005 && std::abs(var - si) <= 0.1 * si;

        const config::ScenarioConfig cfg;
        const stats::RateModel rates = cfg.pass_config().rates;
        const stats::G2Config g2 = cfg.g2_config();
        const double xi = spacetime::decoherence(cfg.link_geometry(), cfg.coherence_time()).xi;
        const int reps = 8;
        std::vector<double> a1, ad, s1, sd, g1, gd, q1, qd;
        double se1 = 0, sed = 0;
        for (int k = 0; k < reps; ++k) {
            stats::Rng r1 = stats::make_stream(20180101, 600 + k);
            stats::Rng r2 = stats::make_stream(20180101, 700 + k);
            const auto h1 = stats::g2_histogram(rates, 1.0, g2, r1);
            const auto hd = stats::g2_histogram(rates, xi, g2, r2);
            a1.push_back(h1.peak_area);
            ad.push_back(hd.peak_area);
            se1 += h1.peak_area_se * h1.peak_area_se;
            sed += hd.peak_area_se * hd.peak_area_se;
            s1.push_back(h1.peak_sigma);
            sd.push_back(hd.peak_sigma);
            g1.push_back(h1.singles_ground);
            gd.push_back(hd.singles_ground);
            q1.push_back(h1.singles_space);
            qd.push_back(hd.singles_space);
        }
        const double A1 = mean(a1), AD = mean(ad);
        const double area_se = std::sqrt(sed + xi * xi * se1) / reps;
        const double area_z = std::abs(AD - xi * A1) / area_se;
        const double width_se = std::sqrt((sample_var(s1) + sample_var(sd)) / reps);
        const double width_z = std::abs(mean(s1) - mean(sd)) / width_se;
        const double ground_z = std::abs(mean(g1) - mean(gd)) / std::sqrt((mean(g1) + mean(gd)) / reps);
        const double space_z = std::abs(mean(q1) - mean(qd)) / std::sqrt((mean(q1) + mean(qd)) / reps);
        const bool g2ok = area_z <= 3 && width_z <= 3 && ground_z <= 3 && space_z <= 3;
        return Outcome{lnd && g2ok,
                       fmt("LND mean %.5f variance %.5f; ", m, var) +
                           fmt("g2 area ratio %.4f vs D_f %.4f (%.2f SE), ", AD / A1, xi, area_z) +
                           fmt("width shift %.2f SE, singles shift %.2f/%.2f SE", width_z, ground_z, space_z)};
    });

    criterion(8, "sensitivity solver", 600.0, [] {
        const config::ScenarioConfig cfg;
        const auto s = cfg.sensitivity_scenario();
        const double n05 = stats::max_tolerable_noise(s, 0.05).noise_per_detector;
        const double n025 = stats::max_tolerable_noise(s, 0.025).noise_per_detector;
        const bool ok = n05 >= 6000.0 / 2 && n05 <= 6000.0 * 2 && n025 >= 950.0 / 2 && n025 <= 950.0 * 2;
        return Outcome{ok, fmt("delta 0.05: %.0f /s per detector, delta 0.025: %.0f /s per detector", n05, n025)};
    });

    criterion(9, "detector aging", 60.0, [] {
        double worst = 0;
        for (const auto& e : aging::reference_table()) {
            const auto m = aging::calibrate_apd(e.name, e.rows);
            for (const auto& r : e.rows)
                worst = std::max(worst, std::abs(aging::temperature_for_target(m, r.rate, 5e8) - r.temp_c));
        }
        const auto slik = aging::reference_model("SLiK");
        const double margin = aging::reserve_margin(slik, 3.0);
        const config::ScenarioConfig cfg;
        const auto s = cfg.sensitivity_scenario();
        const double t2 = 2 * 365.25 * 86400.0;
        const double dark = aging::dark_count_rate(slik, -29.1, aging::fluence_at_time(t2));
        const double pstar = stats::pair_rate_for_noise(s, 0.04, dark);
        bool curve = true;
        for (double p : cfg.detector.pair_rate_per_s.values()) {
            const double b = aging::max_background(t2, p, -29.1, slik, s, 0.04);
            if (p < 0.999 * pstar) curve = curve && b == 0.0;
            if (p > 1.001 * pstar) curve = curve && b > 0.0;
        }
        const bool ok = worst <= 1.0 && std::abs(margin - 13.5) <= 2.0 && pstar >= 1.5e8 && pstar <= 6e8 && curve;
        return Outcome{ok, fmt("temperature table max error %.3f degC, SLiK reserve margin %.2f degC, zero-background below %.3g "
                               "pairs/s at 2 years",
                               worst, margin, pstar)};
    });

    criterion(10, "determinism", 0.0, [] {
        namespace fs = std::filesystem;
        const fs::path base = fs::temp_directory_path() / "questsim_acceptance";
        fs::remove_all(base);
        const config::ScenarioConfig cfg = config::load_config(QS_SOURCE_DIR "/configs/worst_case.yaml");
        for (const char* d : {"a", "b"}) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto run = scenario::run_subcommand("run-all", cfg);
            const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            output::write_run(run, cfg, (base / d).string(), output::Format::csv, el);
        }
        int files = 0, diffs = 0;
        for (const auto& e : fs::directory_iterator(base / "a")) {
            const auto name = e.path().filename();
            if (name == "timing.json") continue;
            ++files;
            if (slurp(e.path()) != slurp(base / "b" / name)) ++diffs;
        }
        int b_files = 0;
        for (const auto& e : fs::directory_iterator(base / "b"))
            if (e.path().filename() != "timing.json") ++b_files;
        fs::remove_all(base);
        return Outcome{files > 0 && diffs == 0 && files == b_files,
                       fmt("%.0f files compared, %.0f differ", files, diffs)};
    });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures ? 1 : 0;
}
