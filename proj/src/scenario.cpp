#include "questsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "questsim/counting_stats.hpp"
#include "questsim/detector_aging.hpp"
#include "questsim/errors.hpp"
#include "questsim/event_channel.hpp"
#include "questsim/link_budget.hpp"
#include "questsim/spacetime.hpp"

namespace qsim::scenario {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kYear = 365.25 * 86400.0;

// Stream ids; pass simulation owns 0..passes-1.
constexpr std::uint64_t kStreamG2Unit = 1u << 20;
constexpr std::uint64_t kStreamG2Decohered = kStreamG2Unit + 1;
constexpr std::uint64_t kStreamPhase = kStreamG2Unit + 2;

Cell num(double v) { return v; }
Cell count(std::uint64_t v) { return static_cast<std::int64_t>(v); }
Cell flag(bool v) { return static_cast<std::int64_t>(v ? 1 : 0); }

spacetime::DecoherenceResult df_at(const config::ScenarioConfig& cfg, double altitude_km, double zenith_deg,
                                   double dt_ps) {
    spacetime::LinkGeometry g = cfg.link_geometry();
    g.altitude_m = altitude_km * 1e3;
    g.zenith_rad = zenith_deg * kDeg;
    spacetime::DecoherenceResult r{};
    r.delta_t = spacetime::time_dilation(g, cfg.geometry.quadrature_rel_tol);
    r.xi = spacetime::event_overlap(r.delta_t, dt_ps * 1e-12);
    r.kappa = r.delta_t / (dt_ps * 1e-12);
    r.d_f = spacetime::decoherence_factor(r.xi, 1.0, 1.0);
    return r;
}

struct Anchor {
    const char* name;
    double reference;
    double tolerance;
    double a;
    double b;
};

Table anchor_table(const std::vector<Anchor>& anchors, bool& ok) {
    Table t{"anchors",
            {{"anchor", ""},
             {"d_f_a", "1"},
             {"d_f_b", "1"},
             {"delta_d_f", "1"},
             {"reference", "1"},
             {"tolerance", "1"},
             {"within_tolerance", "1"}}};
    for (const auto& a : anchors) {
        const double d = a.a - a.b;
        const bool pass = std::abs(d - a.reference) <= a.tolerance;
        ok = ok && pass;
        t.add_row({a.name, num(a.a), num(a.b), num(d), num(a.reference), num(a.tolerance), flag(pass)});
    }
    return t;
}

RunOutput overlap_curve(const config::ScenarioConfig& cfg) {
    RunOutput out{"overlap-curve"};
    const double h = cfg.geometry.altitude_km;
    const double th = cfg.geometry.zenith_deg;
    Table t{"overlap_curve",
            {{"coherence_time", "ps"}, {"bandwidth", "nm"}, {"delta_t", "s"}, {"xi", "1"}, {"d_f", "1"}}};
    for (double dt : cfg.curves.coherence_time_ps.values()) {
        const auto r = df_at(cfg, h, th, dt);
        const double bw = spacetime::coherence_bandwidth(dt * 1e-12, cfg.spectral.wavelength_nm * 1e-9,
                                                         cfg.spectral.bandwidth_convention);
        t.add_row({num(dt), num(bw * 1e9), num(r.delta_t), num(r.xi), num(r.d_f)});
    }
    out.tables.push_back(std::move(t));

    const double dt0 = cfg.spectral.coherence_time_ps;
    bool ok = true;
    out.tables.push_back(anchor_table(
        {{"coherence_time_plus_0.064ps", 0.050, 0.007, df_at(cfg, h, th, dt0 + 0.064).d_f, df_at(cfg, h, th, dt0).d_f}},
        ok));
    out.tables.back().name = "overlap_anchors";
    const auto base = df_at(cfg, h, th, dt0);
    out.summary = {{"delta_t_s", base.delta_t}, {"xi", base.xi}, {"anchors_within_tolerance", flag(ok)}};
    return out;
}

RunOutput altitude_curve(const config::ScenarioConfig& cfg) {
    RunOutput out{"altitude-curve"};
    const double dt = cfg.spectral.coherence_time_ps;
    const double th = cfg.geometry.zenith_deg;
    Table t{"altitude_curve", {{"altitude", "km"}, {"delta_t", "s"}, {"xi", "1"}, {"d_f", "1"}}};
    for (double h : cfg.curves.altitude_km.values()) {
        const auto r = df_at(cfg, h, th, dt);
        t.add_row({num(h), num(r.delta_t), num(r.xi), num(r.d_f)});
    }
    out.tables.push_back(std::move(t));

    const double h0 = cfg.geometry.altitude_km;
    const double f0 = df_at(cfg, h0, th, dt).d_f;
    bool ok = true;
    out.tables.push_back(anchor_table({{"altitude_plus_31km", 0.050, 0.007, f0, df_at(cfg, h0 + 31.0, th, dt).d_f},
                                       {"altitude_plus_15km", 0.025, 0.005, f0, df_at(cfg, h0 + 15.0, th, dt).d_f}},
                                      ok));
    out.tables.back().name = "altitude_anchors";
    out.summary = {{"d_f_base", f0}, {"anchors_within_tolerance", flag(ok)}};
    return out;
}

RunOutput zenith_curve(const config::ScenarioConfig& cfg) {
    RunOutput out{"zenith-curve"};
    const double dt = cfg.spectral.coherence_time_ps;
    const double h = cfg.geometry.altitude_km;
    const double fov = cfg.curves.fov_half_angle_deg;
    Table t{"zenith_curve",
            {{"zenith", "deg"}, {"slant_range", "km"}, {"delta_t", "s"}, {"xi", "1"}, {"d_f", "1"}, {"within_fov", "1"}}};
    for (double z : cfg.curves.zenith_deg.values()) {
        const auto r = df_at(cfg, h, z, dt);
        const double range = spacetime::slant_range(h * 1e3, z * kDeg, cfg.geometry.earth_radius_m);
        t.add_row({num(z), num(range * 1e-3), num(r.delta_t), num(r.xi), num(r.d_f), flag(z <= fov)});
    }
    out.tables.push_back(std::move(t));

    bool ok = true;
    out.tables.push_back(
        anchor_table({{"zenith_0_to_22.5deg", 0.051, 0.005, df_at(cfg, h, 0.0, dt).d_f, df_at(cfg, h, 22.5, dt).d_f}},
                     ok));
    out.tables.back().name = "zenith_anchors";
    out.summary = {{"fov_half_angle_deg", fov},
                   {"d_f_at_fov_edge", df_at(cfg, h, fov, dt).d_f},
                   {"anchors_within_tolerance", flag(ok)}};
    return out;
}

Table g2_table(const std::string& name, const stats::G2Histogram& g) {
    Table t{name, {{"delay", "ns"}, {"counts", "1"}}};
    for (std::size_t i = 0; i < g.bins.size(); ++i) t.add_row({num(g.bin_center(i) * 1e9), count(g.bins[i])});
    return t;
}

RunOutput pass_sim(const config::ScenarioConfig& cfg) {
    RunOutput out{"pass-sim"};
    const stats::PassConfig pc = cfg.pass_config();
    const stats::PassResult res = stats::simulate_pass(pc, cfg.seed);

    Table rec{"pass_records",
              {{"window_start", "s"},
               {"duration", "s"},
               {"source", ""},
               {"singles_ground", "1"},
               {"singles_space", "1"},
               {"coincidences", "1"},
               {"accidentals", "1"},
               {"turbulence_factor", "1"},
               {"noise_factor", "1"},
               {"decoherence", "1"},
               {"heralding", "1"}}};
    for (const auto& r : res.records) {
        Cell h = std::string();
        if (r.source == stats::Source::epps || r.source == stats::Source::fps) h = stats::record_heralding(r, pc.rates);
        rec.add_row({num(r.window_start), num(r.duration), std::string(stats::source_name(r.source)),
                     count(r.singles_ground), count(r.singles_space), count(r.coincidences), count(r.accidentals),
                     num(r.turbulence_factor), num(r.noise_factor), num(r.decoherence), h});
    }
    out.tables.push_back(std::move(rec));

    Table curve{"pass_curve",
                {{"time", "s"},
                 {"zenith", "deg"},
                 {"d_f", "1"},
                 {"epps_heralding", "1"},
                 {"epps_se_propagated", "1"},
                 {"epps_se_empirical", "1"},
                 {"fps_heralding", "1"},
                 {"fps_se_propagated", "1"},
                 {"fps_se_empirical", "1"}}};
    for (const auto& p : res.curve)
        curve.add_row({num(p.time_s), num(p.zenith_rad / kDeg), num(p.decoherence), num(p.epps_mean),
                       num(p.epps_se_propagated), num(p.epps_se_empirical), num(p.fps_mean), num(p.fps_se_propagated),
                       num(p.fps_se_empirical)});
    out.tables.push_back(std::move(curve));

    const stats::TwoSample w = stats::welch_test(res.epps_pass_means, res.fps_pass_means);

    const stats::G2Config gc = cfg.g2_config();
    const double xi0 = spacetime::decoherence(cfg.link_geometry(), cfg.coherence_time()).xi;
    stats::Rng r1 = stats::make_stream(cfg.seed, kStreamG2Unit);
    stats::Rng r2 = stats::make_stream(cfg.seed, kStreamG2Decohered);
    const stats::G2Histogram g_unit = stats::g2_histogram(pc.rates, 1.0, gc, r1);
    const stats::G2Histogram g_dec = stats::g2_histogram(pc.rates, xi0, gc, r2);
    out.tables.push_back(g2_table("g2_unit", g_unit));
    out.tables.push_back(g2_table("g2_decohered", g_dec));

    Table gs{"g2_summary",
             {{"decoherence", "1"},
              {"peak_area", "1"},
              {"peak_area_se", "1"},
              {"peak_center", "ns"},
              {"peak_sigma", "ns"},
              {"floor_per_bin", "1"},
              {"singles_ground", "1"},
              {"singles_space", "1"}}};
    for (const auto* g : {&g_unit, &g_dec})
        gs.add_row({num(g == &g_unit ? 1.0 : xi0), num(g->peak_area), num(g->peak_area_se), num(g->peak_center * 1e9),
                    num(g->peak_sigma * 1e9), num(g->floor_per_bin), count(g->singles_ground),
                    count(g->singles_space)});
    out.tables.push_back(std::move(gs));

    const auto& o = cfg.operations;
    const double mission = o.mission_days * 86400.0;
    const auto profile = spacetime::overhead_pass_profile(pc.altitude, pc.max_zenith, 3, cfg.geometry.earth_radius_m,
                                                          cfg.geometry.earth_mass_length_m);
    const double fiber = spacetime::required_fiber_length(o.processing_time_us * 1e-6, o.fiber_group_index);
    const double range0 = spacetime::slant_range(pc.altitude, 0.0, cfg.geometry.earth_radius_m);
    Table ops{"operations", {{"quantity", ""}, {"value", ""}, {"unit", ""}}};
    ops.add_row({"pass_duration", num(profile.duration_s), "s"});
    ops.add_row({"peak_angular_rate", num(profile.peak_angular_rate / kDeg), "deg/s"});
    ops.add_row({"space_signal_rate", num(pc.rates.space_signal_rate()), "1/s"});
    ops.add_row({"space_pair_rate", num(pc.rates.true_pair_rate()), "1/s"});
    ops.add_row({"space_singles_rate", num(pc.rates.space_singles_rate()), "1/s"});
    ops.add_row({"accidental_rate",
                 num(stats::accidental_rate(pc.rates.ground_singles_rate, pc.rates.space_singles_rate(),
                                            pc.rates.coincidence_window)),
                 "1/s"});
    ops.add_row({"coherence_bandwidth",
                 num(spacetime::coherence_bandwidth(cfg.coherence_time(), cfg.spectral.wavelength_nm * 1e-9,
                                                    cfg.spectral.bandwidth_convention) *
                     1e9),
                 "nm"});
    ops.add_row({"bin_collision_rate", num(stats::bin_collision_rate(o.collision_probability, o.bin_width_ps * 1e-12)),
                 "1/s"});
    ops.add_row({"ground_data_volume",
                 num(stats::data_volume(o.ground_tag_rate_per_s, o.bytes_per_tag, o.ground_duty, mission)), "B"});
    ops.add_row({"space_data_volume",
                 num(stats::data_volume(o.space_tag_rate_per_s, o.bytes_per_tag, o.space_duty, mission)), "B"});
    ops.add_row({"ground_delay_fiber_length", num(fiber), "m"});
    ops.add_row({"spacelike_at_zenith",
                 flag(spacetime::spacelike_separated(o.processing_time_us * 1e-6, range0)), "1"});
    out.tables.push_back(std::move(ops));

    out.summary = {{"windows", static_cast<std::int64_t>(res.curve.size())},
                   {"passes", static_cast<std::int64_t>(pc.passes)},
                   {"welch_t", w.t},
                   {"welch_dof", w.dof},
                   {"welch_p", w.p_value},
                   {"g2_area_ratio", g_dec.peak_area / g_unit.peak_area},
                   {"g2_xi", xi0}};
    return out;
}

RunOutput sensitivity(const config::ScenarioConfig& cfg) {
    RunOutput out{"sensitivity"};
    const stats::SensitivityScenario base = cfg.sensitivity_scenario();
    const double k = cfg.sensitivity.confidence_sigmas;
    Table t{"sensitivity_curve",
            {{"pair_rate", "1/s"}, {"delta_d_f", "1"}, {"max_noise_per_detector", "1/s"}, {"resolvable_at_zero_noise", "1"}}};
    for (double delta : cfg.sensitivity.delta_df)
        for (double p : cfg.sensitivity.pair_rate_per_s.values()) {
            stats::SensitivityScenario s = base;
            s.rates.pair_production_rate = p;
            const auto nt = stats::max_tolerable_noise(s, delta, k);
            t.add_row({num(p), num(delta), num(nt.noise_per_detector), flag(nt.resolvable_at_zero_noise)});
        }
    out.tables.push_back(std::move(t));

    Table w{"sensitivity_worst_case",
            {{"delta_d_f", "1"}, {"max_noise_per_detector", "1/s"}, {"pair_rate_for_configured_noise", "1/s"}}};
    const double noise = cfg.rates.space_noise_per_detector_per_s;
    for (double delta : cfg.sensitivity.delta_df) {
        const auto nt = stats::max_tolerable_noise(base, delta, k);
        Cell pstar = std::string();
        try {
            pstar = stats::pair_rate_for_noise(base, delta, noise, k);
        } catch (const UnreachableTarget&) {
        }
        w.add_row({num(delta), num(nt.noise_per_detector), pstar});
        char key[48];
        std::snprintf(key, sizeof key, "max_noise_delta_%g", delta);
        out.summary.emplace_back(key, nt.noise_per_detector);
    }
    out.tables.push_back(std::move(w));
    out.summary.emplace_back("baseline_d_f", base.baseline_df);
    out.summary.emplace_back("pair_rate", base.rates.pair_production_rate);
    return out;
}

RunOutput detector_aging(const config::ScenarioConfig& cfg) {
    RunOutput out{"detector-aging"};
    const auto& d = cfg.detector;
    aging::MissionEnvironment env;
    env.fluence_two_year = d.fluence_two_year_per_cm2;
    env.ddd_two_year = d.ddd_two_year_mev_per_g;

    Table t1{"table_i",
             {{"apd", ""}, {"target_rate", "1/s"}, {"reference_temp", "degC"}, {"model_temp", "degC"}, {"error", "degC"}}};
    Table models{"apd_models",
                 {{"apd", ""},
                  {"beta", "1/degC"},
                  {"anchor_temp", "degC"},
                  {"anchor_rate", "1/s"},
                  {"intrinsic_rate", "1/s"},
                  {"reserve_margin", "degC"}}};
    double worst = 0.0;
    for (const auto& e : aging::reference_table()) {
        const aging::ApdModel m = aging::calibrate_apd(e.name, e.rows, env.fluence_two_year, d.intrinsic_dark_per_s);
        for (const auto& row : e.rows) {
            const double temp = aging::temperature_for_target(m, row.rate, env.fluence_two_year);
            worst = std::max(worst, std::abs(temp - row.temp_c));
            t1.add_row({e.name, num(row.rate), num(row.temp_c), num(temp), num(temp - row.temp_c)});
        }
        models.add_row({e.name, num(m.beta), num(m.anchor_temp), num(m.anchor_rate), num(m.intrinsic_rate),
                        num(aging::reserve_margin(m, d.reserve_factor))});
    }
    out.tables.push_back(std::move(t1));
    out.tables.push_back(std::move(models));

    const aging::ApdModel m = aging::reference_model(d.apd_model, d.intrinsic_dark_per_s);
    stats::SensitivityScenario s = cfg.sensitivity_scenario();
    const double k = cfg.sensitivity.confidence_sigmas;
    Table curve{"aging_curve",
                {{"mission_time", "yr"},
                 {"pair_rate", "1/s"},
                 {"dark_rate", "1/s"},
                 {"noise_budget", "1/s"},
                 {"max_background", "1/s"}}};
    Table crossover{"aging_crossover", {{"mission_time", "yr"}, {"dark_rate", "1/s"}, {"pair_rate_zero_background", "1/s"}}};
    for (double yr : d.mission_years) {
        const double dark = aging::dark_count_rate(m, d.operating_temp_c, aging::fluence_at_time(yr * kYear, env));
        for (double p : d.pair_rate_per_s.values()) {
            s.rates.pair_production_rate = p;
            const double budget = stats::max_tolerable_noise(s, d.delta_df, k).noise_per_detector;
            curve.add_row({num(yr), num(p), num(dark), num(budget), num(std::max(0.0, budget - dark))});
        }
        s.rates.pair_production_rate = cfg.rates.pair_production_rate_per_s;
        Cell pstar = std::string();
        try {
            pstar = stats::pair_rate_for_noise(s, d.delta_df, dark, k);
        } catch (const UnreachableTarget&) {
        }
        crossover.add_row({num(yr), num(dark), pstar});
    }
    out.tables.push_back(std::move(curve));
    out.tables.push_back(std::move(crossover));

    s.rates.pair_production_rate = cfg.rates.pair_production_rate_per_s;
    const double end_dark =
        aging::dark_count_rate(m, d.operating_temp_c, aging::fluence_at_time(d.mission_years.back() * kYear, env));
    out.summary = {{"apd_model", d.apd_model},
                   {"beta_per_degC", m.beta},
                   {"table_i_max_error_degC", worst},
                   {"reserve_margin_degC", aging::reserve_margin(m, d.reserve_factor)},
                   {"end_of_mission_dark_rate", end_dark},
                   {"pair_rate_zero_background_end", stats::pair_rate_for_noise(s, d.delta_df, end_dark, k)}};
    return out;
}

void link_row(Table& t, const std::string& name, double zenith_deg, const link::LinkBudget& b) {
    t.add_row({name, num(zenith_deg), num(b.range * 1e-3), num(b.beam_fwhm), num(b.beam_e2_radius),
               num(b.losses.atmospheric_db), num(b.losses.clipping_db), num(b.losses.pointing_db),
               num(b.losses.optics_db), num(b.losses.total_db()), num(b.losses.transmission())});
}

RunOutput link_budget(const config::ScenarioConfig& cfg) {
    RunOutput out{"link-budget"};
    const double h = cfg.geometry.altitude_km * 1e3;
    const double zmax = cfg.geometry.max_zenith_deg;
    Table t{"link_budget",
            {{"case", ""},
             {"zenith", "deg"},
             {"slant_range", "km"},
             {"beam_fwhm", "m"},
             {"beam_e2_radius", "m"},
             {"atmospheric", "dB"},
             {"clipping", "dB"},
             {"pointing", "dB"},
             {"optics", "dB"},
             {"total", "dB"},
             {"transmission", "1"}}};

    const link::BeamParams worst_beam = cfg.beam();
    const link::LinkBudget worst = link::evaluate_link(worst_beam, h, zmax * kDeg);
    link_row(t, "worst", zmax, worst);

    link::BeamParams best_beam = worst_beam;
    best_beam.window_transmission = cfg.link.window_transmission_best;
    const link::LinkBudget best = link::evaluate_link(best_beam, h, 0.0);
    link_row(t, "best", 0.0, best);

    link::BeamParams model_beam = worst_beam;
    model_beam.beam_fwhm_override = 0.0;
    link_row(t, "turbulence_model_worst", zmax, link::evaluate_link(model_beam, h, zmax * kDeg));
    model_beam.window_transmission = cfg.link.window_transmission_best;
    link_row(t, "turbulence_model_best", 0.0, link::evaluate_link(model_beam, h, 0.0));
    out.tables.push_back(std::move(t));

    Table atm{"atmospheric_loss", {{"zenith", "deg"}, {"loss", "dB"}}};
    for (int z = 0; z <= 70; z += 5) atm.add_row({num(z), num(link::atmospheric_loss_db(z * kDeg, cfg.link.zenith_loss_db))});
    out.tables.push_back(std::move(atm));

    Table ap{"aperture_optimum",
             {{"fried_r0", "cm"}, {"optimal_tx_diameter", "cm"}, {"spot_fwhm", "m"}, {"unimodal", "1"}}};
    std::vector<double> r0s{10.0, 15.0, 20.0, 30.0, 50.0};
    if (std::find(r0s.begin(), r0s.end(), cfg.link.fried_r0_cm) == r0s.end()) r0s.push_back(cfg.link.fried_r0_cm);
    std::sort(r0s.begin(), r0s.end());
    const double range = worst.range;
    link::ApertureOptimum at_cfg{};
    for (double r0 : r0s) {
        if (r0 < 10.0 || r0 > 50.0) continue;
        const auto o = link::optimal_tx_diameter(r0 * 1e-2, range, worst_beam.wavelength);
        if (r0 == cfg.link.fried_r0_cm) at_cfg = o;
        ap.add_row({num(r0), num(o.diameter * 1e2), num(o.spot_diameter), flag(o.unimodal)});
    }
    out.tables.push_back(std::move(ap));

    out.summary = {{"worst_total_db", worst.losses.total_db()},
                   {"best_total_db", best.losses.total_db()},
                   {"configured_total_db", cfg.link.total_loss_db},
                   {"optics_db", worst.losses.optics_db},
                   {"clipping_db", worst.losses.clipping_db},
                   {"diffraction_spot_fwhm_m",
                    link::diffraction_spot_diameter(worst_beam.tx_diameter, range, worst_beam.wavelength)},
                   {"optimal_tx_diameter_cm", at_cfg.diameter * 1e2}};
    return out;
}

RunOutput channel_verify(const config::ScenarioConfig& cfg) {
    RunOutput out{"channel-verify"};
    const auto& ch = cfg.channel;
    bool ok = true;

    Table g{"channel_grid",
            {{"chi", "1"},
             {"xi", "1"},
             {"eta1", "1"},
             {"eta2", "1"},
             {"coincidence", "1"},
             {"analytic", "1"},
             {"deviation", "1"},
             {"bound", "1"},
             {"singles1", "1"},
             {"singles_drift", "1"}}};
    double worst_ratio = 0.0, worst_drift = 0.0;
    for (const auto& r : channel::verify_grid(ch.chi_values, ch.xi_values, ch.eta_values, ch.spdc_model)) {
        worst_ratio = std::max(worst_ratio, r.deviation / r.bound);
        worst_drift = std::max(worst_drift, r.singles_drift);
        g.add_row({num(r.chi), num(r.xi), num(r.eta1), num(r.eta2), num(r.coincidence), num(r.analytic),
                   num(r.deviation), num(r.bound), num(r.singles1), num(r.singles_drift)});
    }
    ok = ok && worst_ratio <= 1.0 && worst_drift <= 1e-12;
    out.tables.push_back(std::move(g));

    Table coh{"coherent_fidelity", {{"alpha", "1"}, {"beta_abs", "1"}, {"xi", "1"}, {"fidelity", "1"}}};
    double min_fid = 1.0;
    for (double a : ch.coherent_amplitudes)
        for (double b : ch.coherent_amplitudes)
            for (double xi : ch.xi_values) {
                channel::ChannelInput in;
                in.kind = channel::InputKind::coherent;
                in.alpha = a;
                in.beta = std::polar(b, 0.7);
                in.cutoff = ch.coherent_cutoff;
                const auto r = channel::run_event_channel(in, {xi, 1.0, 1.0});
                const double f = fock::fidelity(r.reduced, fock::coherent_pair_state(in.alpha, in.beta, r.cutoff));
                min_fid = std::min(min_fid, f);
                coh.add_row({num(a), num(b), num(xi), num(f)});
            }
    ok = ok && min_fid >= 1.0 - 1e-6;
    out.tables.push_back(std::move(coh));

    Table pol{"polarization",
              {{"chi", "1"},
               {"xi", "1"},
               {"same_polarization", "1"},
               {"analytic", "1"},
               {"deviation", "1"},
               {"cross_polarization", "1"},
               {"cross_bound", "1"}}};
    double worst_pol = 0.0;
    bool cross_ok = true;
    for (double chi : ch.chi_values)
        for (double xi : ch.xi_values) {
            channel::ChannelInput in;
            in.kind = channel::InputKind::polarization_spdc;
            in.chi = chi;
            in.chi_guard = ch.chi_guard;
            const auto r = channel::run_event_channel(in, {xi, 1.0, 1.0});
            const double dev = std::abs(r.same_polarization - xi * chi * chi);
            const double bound = 5.0 * std::pow(chi, 4);
            worst_pol = std::max(worst_pol, dev / bound);
            cross_ok = cross_ok && r.cross_polarization <= r.analytic.cross_polarization_bound;
            pol.add_row({num(chi), num(xi), num(r.same_polarization), num(xi * chi * chi), num(dev),
                         num(r.cross_polarization), num(r.analytic.cross_polarization_bound)});
        }
    ok = ok && worst_pol <= 1.0 && cross_ok;
    out.tables.push_back(std::move(pol));

    Table ph{"phase_invariance", {{"trial", "1"}, {"chi", "1"}, {"xi", "1"}, {"delta", "rad"}, {"deviation", "1"}}};
    stats::Rng rng = stats::make_stream(cfg.seed, kStreamPhase);
    std::uniform_real_distribution<double> U(0.0, 2.0 * std::numbers::pi);
    double worst_phase = 0.0;
    for (int i = 0; i < ch.phase_trials; ++i) {
        const double chi = ch.chi_values[static_cast<std::size_t>(i) % ch.chi_values.size()];
        const double xi = ch.xi_values[static_cast<std::size_t>(i) % ch.xi_values.size()];
        const double delta = U(rng);
        channel::ChannelInput in;
        in.chi = chi;
        in.model = ch.spdc_model;
        in.chi_guard = ch.chi_guard;
        const auto r = channel::run_event_channel(in, {xi, 1.0, 1.0});
        const double dev = channel::phase_delay_invariance_check(r.reduced, delta);
        worst_phase = std::max(worst_phase, dev);
        ph.add_row({static_cast<std::int64_t>(i), num(chi), num(xi), num(delta), num(dev)});
    }
    ok = ok && worst_phase <= 1e-12;
    out.tables.push_back(std::move(ph));

    out.checks_passed = ok;
    out.summary = {{"max_deviation_over_bound", worst_ratio},
                   {"max_singles_drift", worst_drift},
                   {"min_coherent_fidelity", min_fid},
                   {"max_polarization_deviation_over_bound", worst_pol},
                   {"cross_polarization_within_bound", flag(cross_ok)},
                   {"max_phase_deviation", worst_phase},
                   {"verdict", std::string(ok ? "PASS" : "FAIL")}};
    return out;
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw InvalidArgument("table " + name + ": row width does not match header");
    rows.push_back(std::move(row));
}

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {"overlap-curve", "altitude-curve", "zenith-curve",
                                                   "link-budget",   "channel-verify", "sensitivity",
                                                   "detector-aging", "pass-sim"};
    return names;
}

bool is_subcommand(const std::string& name) {
    return name == "run-all" || std::ranges::find(subcommands(), name) != subcommands().end();
}

RunOutput run_subcommand(const std::string& name, const config::ScenarioConfig& cfg) {
    if (name == "overlap-curve") return overlap_curve(cfg);
    if (name == "altitude-curve") return altitude_curve(cfg);
    if (name == "zenith-curve") return zenith_curve(cfg);
    if (name == "pass-sim") return pass_sim(cfg);
    if (name == "sensitivity") return sensitivity(cfg);
    if (name == "detector-aging") return detector_aging(cfg);
    if (name == "link-budget") return link_budget(cfg);
    if (name == "channel-verify") return channel_verify(cfg);
    if (name == "run-all") {
        RunOutput all{"run-all"};
        for (const auto& sub : subcommands()) {
            RunOutput r = run_subcommand(sub, cfg);
            for (auto& t : r.tables) all.tables.push_back(std::move(t));
            for (auto& [k, v] : r.summary) all.summary.emplace_back(sub + "." + k, std::move(v));
            all.checks_passed = all.checks_passed && r.checks_passed;
        }
        return all;
    }
    throw InvalidArgument("unknown subcommand '" + name + "'");
}

}  // namespace qsim::scenario
