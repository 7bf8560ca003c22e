#include "questsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include "questsim/detector_aging.hpp"
#include "questsim/errors.hpp"

namespace qsim::config {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string where(const YAML::Node& n) {
    const auto m = n.Mark();
    if (m.is_null()) return "";
    return " (line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ")";
}

template <class E>
struct EnumName {
    const char* name;
    E value;
};

const EnumName<fock::SpdcModel> kSpdcModels[] = {{"first_order", fock::SpdcModel::first_order},
                                                 {"two_mode_squeezed", fock::SpdcModel::two_mode_squeezed}};
const EnumName<spacetime::BandwidthConvention> kConventions[] = {
    {"reciprocal", spacetime::BandwidthConvention::reciprocal},
    {"gaussian_fwhm", spacetime::BandwidthConvention::gaussian_fwhm},
    {"calibrated", spacetime::BandwidthConvention::calibrated}};
const EnumName<stats::NoiseDistribution> kNoise[] = {{"poisson", stats::NoiseDistribution::poisson},
                                                     {"lognormal", stats::NoiseDistribution::lognormal}};

template <class E, std::size_t N>
const char* enum_name(const EnumName<E> (&table)[N], E v) {
    for (const auto& e : table)
        if (e.value == v) return e.name;
    return "?";
}

class Section {
public:
    Section(YAML::Node node, std::string path, std::vector<std::string>& issues)
        : node_(std::move(node)), path_(std::move(path)), issues_(issues) {
        present_ = node_.IsDefined() && node_.IsMap();
        if (node_.IsDefined() && !node_.IsNull() && !node_.IsMap())
            issues_.push_back(path_ + ": expected a mapping" + where(node_));
    }

    ~Section() {
        if (!present_) return;
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!seen_.count(key)) issues_.push_back(path_ + "." + key + ": unknown key" + where(kv.first));
        }
    }

    Section sub(const char* key) {
        seen_.insert(key);
        return Section(present_ ? YAML::Node(std::as_const(node_)[key]) : YAML::Node(YAML::NodeType::Undefined), path_.empty() ? key : path_ + "." + key, issues_);
    }

    template <class T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (!present_) return;
        const YAML::Node v = std::as_const(node_)[key];
        if (!v) return;
        try {
            out = v.as<T>();
        } catch (const YAML::Exception&) {
            issues_.push_back(name(key) + ": cannot read value '" + scalar(v) + "'" + where(v));
        }
    }

    void get(const char* key, Grid& out) {
        Section s = sub(key);
        s.get("min", out.min);
        s.get("max", out.max);
        s.get("points", out.points);
    }

    template <class E, std::size_t N>
    void get_enum(const char* key, E& out, const EnumName<E> (&table)[N]) {
        std::string s = enum_name(table, out);
        get(key, s);
        for (const auto& e : table)
            if (s == e.name) {
                out = e.value;
                return;
            }
        std::string allowed;
        for (const auto& e : table) allowed += std::string(allowed.empty() ? "" : "|") + e.name;
        issues_.push_back(name(key) + ": expected one of " + allowed + ", got '" + s + "'" + where(std::as_const(node_)[key]));
    }

private:
    std::string name(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
    static std::string scalar(const YAML::Node& v) { return v.IsScalar() ? v.Scalar() : "<non-scalar>"; }

    YAML::Node node_;
    bool present_ = false;
    std::string path_;
    std::vector<std::string>& issues_;
    std::set<std::string> seen_;
};

ScenarioConfig parse(const YAML::Node& root) {
    std::vector<std::string> issues;
    ScenarioConfig c;
    if (root && !root.IsNull() && !root.IsMap()) throw ValidationError({"config root must be a mapping"});
    {
        Section top(root.IsNull() ? YAML::Node() : root, "", issues);
        top.get("seed", c.seed);
        {
            Section s = top.sub("geometry");
            s.get("altitude_km", c.geometry.altitude_km);
            s.get("zenith_deg", c.geometry.zenith_deg);
            s.get("max_zenith_deg", c.geometry.max_zenith_deg);
            s.get("earth_radius_m", c.geometry.earth_radius_m);
            s.get("earth_mass_length_m", c.geometry.earth_mass_length_m);
            s.get("quadrature_rel_tol", c.geometry.quadrature_rel_tol);
        }
        {
            Section s = top.sub("spectral");
            s.get("coherence_time_ps", c.spectral.coherence_time_ps);
            s.get("wavelength_nm", c.spectral.wavelength_nm);
            s.get_enum("bandwidth_convention", c.spectral.bandwidth_convention, kConventions);
        }
        {
            Section s = top.sub("channel");
            s.get("chi_values", c.channel.chi_values);
            s.get("xi_values", c.channel.xi_values);
            s.get("eta_values", c.channel.eta_values);
            s.get_enum("spdc_model", c.channel.spdc_model, kSpdcModels);
            s.get("chi_guard", c.channel.chi_guard);
            s.get("coherent_amplitudes", c.channel.coherent_amplitudes);
            s.get("coherent_cutoff", c.channel.coherent_cutoff);
            s.get("phase_trials", c.channel.phase_trials);
        }
        {
            Section s = top.sub("link");
            s.get("tx_diameter_cm", c.link.tx_diameter_cm);
            s.get("fried_r0_cm", c.link.fried_r0_cm);
            s.get("pointing_jitter_urad", c.link.pointing_jitter_urad);
            s.get("rx_aperture_cm", c.link.rx_aperture_cm);
            s.get("obscuration", c.link.obscuration);
            s.get("beam_fwhm_m", c.link.beam_fwhm_m);
            s.get("zenith_loss_db", c.link.zenith_loss_db);
            s.get("detector_efficiency", c.link.detector_efficiency);
            s.get("tx_transmission", c.link.tx_transmission);
            s.get("window_transmission", c.link.window_transmission);
            s.get("window_transmission_best", c.link.window_transmission_best);
            s.get("rx_transmission", c.link.rx_transmission);
            s.get("total_loss_db", c.link.total_loss_db);
            s.get("best_loss_db", c.link.best_loss_db);
        }
        {
            Section s = top.sub("rates");
            s.get("pair_production_rate_per_s", c.rates.pair_production_rate_per_s);
            s.get("intrinsic_heralding", c.rates.intrinsic_heralding);
            s.get("ground_singles_per_s", c.rates.ground_singles_per_s);
            s.get("space_noise_per_detector_per_s", c.rates.space_noise_per_detector_per_s);
            s.get("space_dark_per_detector_per_s", c.rates.space_dark_per_detector_per_s);
            s.get("space_detectors", c.rates.space_detectors);
            s.get("coincidence_window_ns", c.rates.coincidence_window_ns);
            s.get_enum("noise_distribution", c.rates.noise_distribution, kNoise);
        }
        {
            Section s = top.sub("turbulence");
            s.get("scintillation_index", c.turbulence.scintillation_index);
            s.get("correlation_window_ms", c.turbulence.correlation_window_ms);
        }
        {
            Section s = top.sub("schedule");
            s.get("dark_cal", c.schedule.dark_cal);
            s.get("background_cal", c.schedule.background_cal);
            s.get("link_cal", c.schedule.link_cal);
            s.get("fps", c.schedule.fps);
            s.get("epps", c.schedule.epps);
            s.get("switching", c.schedule.switching);
        }
        {
            Section s = top.sub("sensitivity");
            s.get("integration_time_s", c.sensitivity.integration_time_s);
            s.get("confidence_sigmas", c.sensitivity.confidence_sigmas);
            s.get("delta_df", c.sensitivity.delta_df);
            s.get("pair_rate_per_s", c.sensitivity.pair_rate_per_s);
        }
        {
            Section s = top.sub("pass");
            s.get("passes", c.pass.passes);
            s.get("integration_time_s", c.pass.integration_time_s);
        }
        {
            Section s = top.sub("g2");
            s.get("jitter_space_ns", c.g2.jitter_space_ns);
            s.get("jitter_ground_ns", c.g2.jitter_ground_ns);
            s.get("bin_width_ps", c.g2.bin_width_ps);
            s.get("span_ns", c.g2.span_ns);
            s.get("duration_s", c.g2.duration_s);
        }
        {
            Section s = top.sub("detector");
            s.get("apd_model", c.detector.apd_model);
            s.get("operating_temp_c", c.detector.operating_temp_c);
            s.get("intrinsic_dark_per_s", c.detector.intrinsic_dark_per_s);
            s.get("reserve_factor", c.detector.reserve_factor);
            s.get("mission_years", c.detector.mission_years);
            s.get("fluence_two_year_per_cm2", c.detector.fluence_two_year_per_cm2);
            s.get("ddd_two_year_mev_per_g", c.detector.ddd_two_year_mev_per_g);
            s.get("delta_df", c.detector.delta_df);
            s.get("pair_rate_per_s", c.detector.pair_rate_per_s);
        }
        {
            Section s = top.sub("curves");
            s.get("coherence_time_ps", c.curves.coherence_time_ps);
            s.get("altitude_km", c.curves.altitude_km);
            s.get("zenith_deg", c.curves.zenith_deg);
            s.get("fov_half_angle_deg", c.curves.fov_half_angle_deg);
        }
        {
            Section s = top.sub("operations");
            s.get("ground_tag_rate_per_s", c.operations.ground_tag_rate_per_s);
            s.get("space_tag_rate_per_s", c.operations.space_tag_rate_per_s);
            s.get("bytes_per_tag", c.operations.bytes_per_tag);
            s.get("ground_duty", c.operations.ground_duty);
            s.get("space_duty", c.operations.space_duty);
            s.get("mission_days", c.operations.mission_days);
            s.get("bin_width_ps", c.operations.bin_width_ps);
            s.get("collision_probability", c.operations.collision_probability);
            s.get("processing_time_us", c.operations.processing_time_us);
            s.get("fiber_group_index", c.operations.fiber_group_index);
        }
    }
    for (auto& s : validate(c)) issues.push_back(std::move(s));
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return c;
}

class Checker {
public:
    explicit Checker(std::vector<std::string>& out) : out_(out) {}

    void range(const std::string& name, double v, double lo, double hi, bool lo_open = false, bool hi_open = false) {
        const bool ok = std::isfinite(v) && (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi);
        if (!ok) {
            std::ostringstream os;
            os << name << ": " << v << " outside " << (lo_open ? "(" : "[") << lo << ", " << hi << (hi_open ? ")" : "]");
            out_.push_back(os.str());
        }
    }
    void each(const std::string& name, const std::vector<double>& vs, double lo, double hi, bool lo_open = false,
              bool hi_open = false) {
        if (vs.empty()) out_.push_back(name + ": list must not be empty");
        for (double v : vs) range(name, v, lo, hi, lo_open, hi_open);
    }
    void grid(const std::string& name, const Grid& g, double lo, double hi, bool hi_open = false) {
        if (g.points < 2) out_.push_back(name + ".points: need at least 2");
        if (!(g.max > g.min)) out_.push_back(name + ": max must exceed min");
        range(name + ".min", g.min, lo, hi, false, hi_open);
        range(name + ".max", g.max, lo, hi, false, hi_open);
    }
    void require(bool ok, const std::string& msg) {
        if (!ok) out_.push_back(msg);
    }

private:
    std::vector<std::string>& out_;
};

void put(std::ostringstream& os, const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << key << '=' << buf << '\n';
}
void put(std::ostringstream& os, const char* key, const std::vector<double>& v) {
    os << key << '=';
    for (std::size_t i = 0; i < v.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        os << (i ? "," : "") << buf;
    }
    os << '\n';
}
void put(std::ostringstream& os, const char* key, const Grid& g) {
    put(os, (std::string(key) + ".min").c_str(), g.min);
    put(os, (std::string(key) + ".max").c_str(), g.max);
    os << key << ".points=" << g.points << '\n';
}

}  // namespace

std::vector<double> Grid::values() const {
    std::vector<double> v;
    for (int i = 0; i < points; ++i) v.push_back(points == 1 ? min : min + (max - min) * i / (points - 1));
    return v;
}

spacetime::LinkGeometry ScenarioConfig::link_geometry() const {
    spacetime::LinkGeometry g;
    g.altitude_m = geometry.altitude_km * 1e3;
    g.zenith_rad = geometry.zenith_deg * kDeg;
    g.earth_radius_m = geometry.earth_radius_m;
    g.earth_mass_length_m = geometry.earth_mass_length_m;
    return g;
}

link::BeamParams ScenarioConfig::beam() const {
    link::BeamParams b;
    b.wavelength = spectral.wavelength_nm * 1e-9;
    b.tx_diameter = link.tx_diameter_cm * 1e-2;
    b.fried_r0 = link.fried_r0_cm * 1e-2;
    b.pointing_jitter = link.pointing_jitter_urad * 1e-6;
    b.rx_aperture = link.rx_aperture_cm * 1e-2;
    b.obscuration = link.obscuration;
    b.beam_fwhm_override = link.beam_fwhm_m;
    b.zenith_loss_db = link.zenith_loss_db;
    b.det_eff = link.detector_efficiency;
    b.tx_transmission = link.tx_transmission;
    b.window_transmission = link.window_transmission;
    b.rx_transmission = link.rx_transmission;
    return b;
}

stats::RateModel ScenarioConfig::rate_model() const {
    stats::RateModel r;
    r.pair_production_rate = rates.pair_production_rate_per_s;
    r.intrinsic_heralding = rates.intrinsic_heralding;
    r.link_transmission = link::from_db(link.total_loss_db);
    r.ground_singles_rate = rates.ground_singles_per_s;
    r.space_noise_per_detector = rates.space_noise_per_detector_per_s;
    r.space_dark_per_detector = rates.space_dark_per_detector_per_s;
    r.space_detectors = rates.space_detectors;
    r.coincidence_window = rates.coincidence_window_ns * 1e-9;
    r.noise_distribution = rates.noise_distribution;
    return r;
}

stats::TurbulenceModel ScenarioConfig::turbulence_model() const {
    return {turbulence.scintillation_index, turbulence.correlation_window_ms * 1e-3};
}

stats::SensitivityScenario ScenarioConfig::sensitivity_scenario() const {
    stats::SensitivityScenario s;
    s.rates = rate_model();
    s.turbulence = turbulence_model();
    s.integration_time = sensitivity.integration_time_s;
    spacetime::LinkGeometry g = link_geometry();
    g.zenith_rad = 0.0;
    s.baseline_df = spacetime::event_overlap(spacetime::time_dilation(g, geometry.quadrature_rel_tol), coherence_time());
    s.model = stats::VarianceModel::common_mode_rejected;
    return s;
}

stats::PassConfig ScenarioConfig::pass_config() const {
    stats::PassConfig p;
    p.rates = rate_model();
    p.turbulence = turbulence_model();
    p.schedule = schedule;
    p.altitude = geometry.altitude_km * 1e3;
    p.max_zenith = geometry.max_zenith_deg * kDeg;
    p.coherence_time = coherence_time();
    p.integration_time = pass.integration_time_s;
    p.passes = pass.passes;
    return p;
}

stats::G2Config ScenarioConfig::g2_config() const {
    stats::G2Config g;
    g.jitter_space_sigma = g2.jitter_space_ns * 1e-9;
    g.jitter_ground_sigma = g2.jitter_ground_ns * 1e-9;
    g.bin_width = g2.bin_width_ps * 1e-12;
    g.span = g2.span_ns * 1e-9;
    g.duration = g2.duration_s;
    return g;
}

std::vector<std::string> validate(const ScenarioConfig& c) {
    std::vector<std::string> out;
    Checker k(out);
    k.range("geometry.altitude_km", c.geometry.altitude_km, 200.0, 1000.0);
    k.range("geometry.zenith_deg", c.geometry.zenith_deg, 0.0, 80.0, false, true);
    k.range("geometry.max_zenith_deg", c.geometry.max_zenith_deg, 0.0, 80.0, true);
    k.range("geometry.earth_radius_m", c.geometry.earth_radius_m, 0.0, 1e8, true);
    k.require(c.geometry.earth_mass_length_m > 0.0 && c.geometry.earth_mass_length_m / c.geometry.earth_radius_m < 1e-8,
              "geometry.earth_mass_length_m: must be positive with m / r_e < 1e-8");
    k.range("geometry.quadrature_rel_tol", c.geometry.quadrature_rel_tol, 0.0, 1e-3, true);

    k.range("spectral.coherence_time_ps", c.spectral.coherence_time_ps, 0.1, 10.0);
    k.range("spectral.wavelength_nm", c.spectral.wavelength_nm, 200.0, 3000.0);

    k.range("channel.chi_guard", c.channel.chi_guard, 0.0, 0.3, true);
    k.each("channel.chi_values", c.channel.chi_values, 0.0, c.channel.chi_guard, true);
    k.each("channel.xi_values", c.channel.xi_values, 0.0, 1.0);
    k.each("channel.eta_values", c.channel.eta_values, 0.0, 1.0);
    k.each("channel.coherent_amplitudes", c.channel.coherent_amplitudes, 0.0, 2.0);
    k.range("channel.coherent_cutoff", c.channel.coherent_cutoff, 2, 16);
    k.range("channel.phase_trials", c.channel.phase_trials, 1, 10000);

    k.range("link.tx_diameter_cm", c.link.tx_diameter_cm, 0.0, 200.0, true);
    k.range("link.fried_r0_cm", c.link.fried_r0_cm, 5.0, 100.0);
    k.range("link.pointing_jitter_urad", c.link.pointing_jitter_urad, 0.0, 1000.0);
    k.range("link.rx_aperture_cm", c.link.rx_aperture_cm, 0.0, 1000.0, true);
    k.range("link.obscuration", c.link.obscuration, 0.0, 0.5);
    k.range("link.beam_fwhm_m", c.link.beam_fwhm_m, 0.0, 1000.0);
    k.range("link.zenith_loss_db", c.link.zenith_loss_db, 0.0, 80.0);
    for (auto [name, v] : {std::pair{"link.detector_efficiency", c.link.detector_efficiency},
                           {"link.tx_transmission", c.link.tx_transmission},
                           {"link.window_transmission", c.link.window_transmission},
                           {"link.window_transmission_best", c.link.window_transmission_best},
                           {"link.rx_transmission", c.link.rx_transmission}})
        k.range(name, v, 0.0, 1.0, true);
    k.range("link.total_loss_db", c.link.total_loss_db, 0.0, 80.0);
    k.range("link.best_loss_db", c.link.best_loss_db, 0.0, 80.0);

    k.range("rates.pair_production_rate_per_s", c.rates.pair_production_rate_per_s, 0.0, 1e12, true);
    k.range("rates.intrinsic_heralding", c.rates.intrinsic_heralding, 0.0, 1.0, true);
    k.range("rates.ground_singles_per_s", c.rates.ground_singles_per_s, 0.0, 1e10, true);
    k.range("rates.space_noise_per_detector_per_s", c.rates.space_noise_per_detector_per_s, 0.0, 1e9);
    k.range("rates.space_dark_per_detector_per_s", c.rates.space_dark_per_detector_per_s, 0.0,
            c.rates.space_noise_per_detector_per_s);
    k.range("rates.space_detectors", c.rates.space_detectors, 1, 64);
    k.range("rates.coincidence_window_ns", c.rates.coincidence_window_ns, 0.0, 1e3, true);

    k.range("turbulence.scintillation_index", c.turbulence.scintillation_index, 0.0, 1.0);
    k.range("turbulence.correlation_window_ms", c.turbulence.correlation_window_ms, 0.0, 1e4, true);

    const stats::Utilization& u = c.schedule;
    for (auto [name, v] : {std::pair{"schedule.dark_cal", u.dark_cal},
                           {"schedule.background_cal", u.background_cal},
                           {"schedule.link_cal", u.link_cal},
                           {"schedule.fps", u.fps},
                           {"schedule.epps", u.epps},
                           {"schedule.switching", u.switching}})
        k.range(name, v, 0.0, 1.0);
    if (std::abs(u.sum() - 1.0) > 1e-9) {
        std::ostringstream os;
        os.precision(12);
        os << "schedule: utilization fractions sum to " << u.sum() << ", expected 1";
        out.push_back(os.str());
    }
    k.require(u.fps > 0.0 && u.epps > 0.0, "schedule: fps and epps fractions must be positive");

    k.range("sensitivity.integration_time_s", c.sensitivity.integration_time_s, 0.0, 1e6, true);
    k.range("sensitivity.confidence_sigmas", c.sensitivity.confidence_sigmas, 0.0, 10.0, true);
    k.each("sensitivity.delta_df", c.sensitivity.delta_df, 0.0, 0.5, true, true);
    k.grid("sensitivity.pair_rate_per_s", c.sensitivity.pair_rate_per_s, 1.0, 1e12);

    k.range("pass.passes", c.pass.passes, 2, 10000);
    k.range("pass.integration_time_s", c.pass.integration_time_s, 0.0, 60.0, true);

    k.range("g2.jitter_space_ns", c.g2.jitter_space_ns, 0.0, 100.0);
    k.range("g2.jitter_ground_ns", c.g2.jitter_ground_ns, 0.0, 100.0);
    k.range("g2.bin_width_ps", c.g2.bin_width_ps, 10.0, 1e6);
    k.require(c.g2.bin_width_ps * 1e-3 <= c.g2.span_ns / 10.0, "g2.bin_width_ps: must not exceed span / 10");
    k.range("g2.duration_s", c.g2.duration_s, 0.0, 1e3, true);

    bool known = false;
    for (const auto& e : aging::reference_table()) known = known || e.name == c.detector.apd_model;
    k.require(known, "detector.apd_model: unknown model '" + c.detector.apd_model + "'");
    k.range("detector.operating_temp_c", c.detector.operating_temp_c, -100.0, 20.0);
    k.range("detector.intrinsic_dark_per_s", c.detector.intrinsic_dark_per_s, 0.0, 2000.0, false, true);
    k.range("detector.reserve_factor", c.detector.reserve_factor, 1.0, 100.0);
    k.each("detector.mission_years", c.detector.mission_years, 0.0, 20.0);
    k.range("detector.fluence_two_year_per_cm2", c.detector.fluence_two_year_per_cm2, 0.0, 1e14, true);
    k.range("detector.ddd_two_year_mev_per_g", c.detector.ddd_two_year_mev_per_g, 0.0, 1e12, true);
    k.range("detector.delta_df", c.detector.delta_df, 0.0, 0.5, true, true);
    k.grid("detector.pair_rate_per_s", c.detector.pair_rate_per_s, 1.0, 1e12);

    k.grid("curves.coherence_time_ps", c.curves.coherence_time_ps, 0.1, 10.0);
    k.grid("curves.altitude_km", c.curves.altitude_km, 200.0, 1000.0);
    k.grid("curves.zenith_deg", c.curves.zenith_deg, 0.0, 80.0, true);
    k.range("curves.fov_half_angle_deg", c.curves.fov_half_angle_deg, 0.0, 80.0);

    const Operations& o = c.operations;
    k.range("operations.ground_tag_rate_per_s", o.ground_tag_rate_per_s, 0.0, 1e12);
    k.range("operations.space_tag_rate_per_s", o.space_tag_rate_per_s, 0.0, 1e12);
    k.range("operations.bytes_per_tag", o.bytes_per_tag, 0.0, 1e3);
    k.range("operations.ground_duty", o.ground_duty, 0.0, 1.0);
    k.range("operations.space_duty", o.space_duty, 0.0, 1.0);
    k.range("operations.mission_days", o.mission_days, 0.0, 1e5);
    k.range("operations.bin_width_ps", o.bin_width_ps, 0.0, 1e6, true);
    k.range("operations.collision_probability", o.collision_probability, 0.0, 1.0, false, true);
    k.range("operations.processing_time_us", o.processing_time_us, 0.0, 1e6);
    k.range("operations.fiber_group_index", o.fiber_group_index, 1.0, 5.0);
    return out;
}

ScenarioConfig load_config_string(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ParseError("config parse error: " + e.msg, e.mark.line + 1, e.mark.column + 1);
    }
    return parse(root);
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return load_config_string(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what(),
                         e.line(), e.column());
    }
}

std::string canonical_form(const ScenarioConfig& c) {
    std::ostringstream os;
    os << "seed=" << c.seed << '\n';
    put(os, "geometry.altitude_km", c.geometry.altitude_km);
    put(os, "geometry.zenith_deg", c.geometry.zenith_deg);
    put(os, "geometry.max_zenith_deg", c.geometry.max_zenith_deg);
    put(os, "geometry.earth_radius_m", c.geometry.earth_radius_m);
    put(os, "geometry.earth_mass_length_m", c.geometry.earth_mass_length_m);
    put(os, "geometry.quadrature_rel_tol", c.geometry.quadrature_rel_tol);
    put(os, "spectral.coherence_time_ps", c.spectral.coherence_time_ps);
    put(os, "spectral.wavelength_nm", c.spectral.wavelength_nm);
    os << "spectral.bandwidth_convention=" << enum_name(kConventions, c.spectral.bandwidth_convention) << '\n';
    put(os, "channel.chi_values", c.channel.chi_values);
    put(os, "channel.xi_values", c.channel.xi_values);
    put(os, "channel.eta_values", c.channel.eta_values);
    os << "channel.spdc_model=" << enum_name(kSpdcModels, c.channel.spdc_model) << '\n';
    put(os, "channel.chi_guard", c.channel.chi_guard);
    put(os, "channel.coherent_amplitudes", c.channel.coherent_amplitudes);
    os << "channel.coherent_cutoff=" << c.channel.coherent_cutoff << '\n';
    os << "channel.phase_trials=" << c.channel.phase_trials << '\n';
    put(os, "link.tx_diameter_cm", c.link.tx_diameter_cm);
    put(os, "link.fried_r0_cm", c.link.fried_r0_cm);
    put(os, "link.pointing_jitter_urad", c.link.pointing_jitter_urad);
    put(os, "link.rx_aperture_cm", c.link.rx_aperture_cm);
    put(os, "link.obscuration", c.link.obscuration);
    put(os, "link.beam_fwhm_m", c.link.beam_fwhm_m);
    put(os, "link.zenith_loss_db", c.link.zenith_loss_db);
    put(os, "link.detector_efficiency", c.link.detector_efficiency);
    put(os, "link.tx_transmission", c.link.tx_transmission);
    put(os, "link.window_transmission", c.link.window_transmission);
    put(os, "link.window_transmission_best", c.link.window_transmission_best);
    put(os, "link.rx_transmission", c.link.rx_transmission);
    put(os, "link.total_loss_db", c.link.total_loss_db);
    put(os, "link.best_loss_db", c.link.best_loss_db);
    put(os, "rates.pair_production_rate_per_s", c.rates.pair_production_rate_per_s);
    put(os, "rates.intrinsic_heralding", c.rates.intrinsic_heralding);
    put(os, "rates.ground_singles_per_s", c.rates.ground_singles_per_s);
    put(os, "rates.space_noise_per_detector_per_s", c.rates.space_noise_per_detector_per_s);
    put(os, "rates.space_dark_per_detector_per_s", c.rates.space_dark_per_detector_per_s);
    os << "rates.space_detectors=" << c.rates.space_detectors << '\n';
    put(os, "rates.coincidence_window_ns", c.rates.coincidence_window_ns);
    os << "rates.noise_distribution=" << enum_name(kNoise, c.rates.noise_distribution) << '\n';
    put(os, "turbulence.scintillation_index", c.turbulence.scintillation_index);
    put(os, "turbulence.correlation_window_ms", c.turbulence.correlation_window_ms);
    put(os, "schedule.dark_cal", c.schedule.dark_cal);
    put(os, "schedule.background_cal", c.schedule.background_cal);
    put(os, "schedule.link_cal", c.schedule.link_cal);
    put(os, "schedule.fps", c.schedule.fps);
    put(os, "schedule.epps", c.schedule.epps);
    put(os, "schedule.switching", c.schedule.switching);
    put(os, "sensitivity.integration_time_s", c.sensitivity.integration_time_s);
    put(os, "sensitivity.confidence_sigmas", c.sensitivity.confidence_sigmas);
    put(os, "sensitivity.delta_df", c.sensitivity.delta_df);
    put(os, "sensitivity.pair_rate_per_s", c.sensitivity.pair_rate_per_s);
    os << "pass.passes=" << c.pass.passes << '\n';
    put(os, "pass.integration_time_s", c.pass.integration_time_s);
    put(os, "g2.jitter_space_ns", c.g2.jitter_space_ns);
    put(os, "g2.jitter_ground_ns", c.g2.jitter_ground_ns);
    put(os, "g2.bin_width_ps", c.g2.bin_width_ps);
    put(os, "g2.span_ns", c.g2.span_ns);
    put(os, "g2.duration_s", c.g2.duration_s);
    os << "detector.apd_model=" << c.detector.apd_model << '\n';
    put(os, "detector.operating_temp_c", c.detector.operating_temp_c);
    put(os, "detector.intrinsic_dark_per_s", c.detector.intrinsic_dark_per_s);
    put(os, "detector.reserve_factor", c.detector.reserve_factor);
    put(os, "detector.mission_years", c.detector.mission_years);
    put(os, "detector.fluence_two_year_per_cm2", c.detector.fluence_two_year_per_cm2);
    put(os, "detector.ddd_two_year_mev_per_g", c.detector.ddd_two_year_mev_per_g);
    put(os, "detector.delta_df", c.detector.delta_df);
    put(os, "detector.pair_rate_per_s", c.detector.pair_rate_per_s);
    put(os, "curves.coherence_time_ps", c.curves.coherence_time_ps);
    put(os, "curves.altitude_km", c.curves.altitude_km);
    put(os, "curves.zenith_deg", c.curves.zenith_deg);
    put(os, "curves.fov_half_angle_deg", c.curves.fov_half_angle_deg);
    put(os, "operations.ground_tag_rate_per_s", c.operations.ground_tag_rate_per_s);
    put(os, "operations.space_tag_rate_per_s", c.operations.space_tag_rate_per_s);
    put(os, "operations.bytes_per_tag", c.operations.bytes_per_tag);
    put(os, "operations.ground_duty", c.operations.ground_duty);
    put(os, "operations.space_duty", c.operations.space_duty);
    put(os, "operations.mission_days", c.operations.mission_days);
    put(os, "operations.bin_width_ps", c.operations.bin_width_ps);
    put(os, "operations.collision_probability", c.operations.collision_probability);
    put(os, "operations.processing_time_us", c.operations.processing_time_us);
    put(os, "operations.fiber_group_index", c.operations.fiber_group_index);
    return os.str();
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw IoError("SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

std::string config_hash(const ScenarioConfig& c) { return sha256_hex(canonical_form(c)); }

}  // namespace qsim::config
