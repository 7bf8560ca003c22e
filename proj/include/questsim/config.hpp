#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "questsim/counting_stats.hpp"
#include "questsim/event_channel.hpp"
#include "questsim/link_budget.hpp"
#include "questsim/spacetime.hpp"

namespace qsim::config {

struct Grid {
    double min;
    double max;
    int points;

    std::vector<double> values() const;
};

struct Geometry {
    double altitude_km = 400.0;
    double zenith_deg = 0.0;
    double max_zenith_deg = 37.0;
    double earth_radius_m = spacetime::kEarthRadius;
    double earth_mass_length_m = spacetime::kEarthMassLength;
    double quadrature_rel_tol = 1e-10;
};

struct Spectral {
    double coherence_time_ps = 0.8;
    double wavelength_nm = 830.0;
    spacetime::BandwidthConvention bandwidth_convention = spacetime::BandwidthConvention::calibrated;
};

struct Channel {
    std::vector<double> chi_values{0.01, 0.05, 0.1};
    std::vector<double> xi_values{0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<double> eta_values{0.5, 1.0};
    fock::SpdcModel spdc_model = fock::SpdcModel::two_mode_squeezed;
    double chi_guard = fock::kChiGuard;
    std::vector<double> coherent_amplitudes{0.0, 0.25, 0.5};
    int coherent_cutoff = 8;
    int phase_trials = 20;
};

struct Link {
    double tx_diameter_cm = 13.0;
    double fried_r0_cm = 15.0;
    double pointing_jitter_urad = 10.0;
    double rx_aperture_cm = 23.5;
    double obscuration = 0.35;
    double beam_fwhm_m = 4.5;  ///< worst-case receive spot; 0 uses the turbulence model
    double zenith_loss_db = 3.5;
    double detector_efficiency = 0.6;
    double tx_transmission = 0.7;
    double window_transmission = 0.6;
    double window_transmission_best = 0.75;
    double rx_transmission = 0.7;
    double total_loss_db = 46.0;  ///< drives the counting rate model
    double best_loss_db = 40.0;
};

struct Rates {
    double pair_production_rate_per_s = 350e6;
    double intrinsic_heralding = 0.2;
    double ground_singles_per_s = 2e5;
    double space_noise_per_detector_per_s = 6000.0;
    double space_dark_per_detector_per_s = 100.0;
    int space_detectors = 2;
    double coincidence_window_ns = 1.0;
    stats::NoiseDistribution noise_distribution = stats::NoiseDistribution::lognormal;
};

struct Turbulence {
    double scintillation_index = 0.05;
    double correlation_window_ms = 10.0;
};

struct Sensitivity {
    double integration_time_s = 1.0;
    double confidence_sigmas = 1.0;
    std::vector<double> delta_df{0.05, 0.04, 0.025, 0.01};
    Grid pair_rate_per_s{5e7, 1e9, 39};
};

struct Pass {
    int passes = 16;
    double integration_time_s = 1.0;
};

struct G2 {
    double jitter_space_ns = 2.0;
    double jitter_ground_ns = 0.2;
    double bin_width_ps = 100.0;
    double span_ns = 200.0;
    double duration_s = 10.0;
};

struct Detector {
    std::string apd_model = "SLiK";
    double operating_temp_c = -29.1;
    double intrinsic_dark_per_s = 100.0;
    double reserve_factor = 3.0;
    std::vector<double> mission_years{0.0, 0.5, 1.0, 1.5, 2.0};
    double fluence_two_year_per_cm2 = 5e8;
    double ddd_two_year_mev_per_g = 1.27e6;
    double delta_df = 0.04;
    Grid pair_rate_per_s{5e7, 1e9, 39};
};

struct Curves {
    Grid coherence_time_ps{0.2, 3.0, 57};
    Grid altitude_km{200.0, 1000.0, 81};
    Grid zenith_deg{0.0, 75.0, 76};
    double fov_half_angle_deg = 22.0;
};

struct Operations {
    double ground_tag_rate_per_s = 1.5e9;
    double space_tag_rate_per_s = 250000.0;
    double bytes_per_tag = 10.0;
    double ground_duty = 0.00165;
    double space_duty = 0.05;
    double mission_days = 182.625;
    double bin_width_ps = 225.0;
    double collision_probability = 0.05;
    double processing_time_us = 1.0;
    double fiber_group_index = 1.5;
};

struct ScenarioConfig {
    std::uint64_t seed = 20180101;
    Geometry geometry;
    Spectral spectral;
    Channel channel;
    Link link;
    Rates rates;
    Turbulence turbulence;
    stats::Utilization schedule;
    Sensitivity sensitivity;
    Pass pass;
    G2 g2;
    Detector detector;
    Curves curves;
    Operations operations;

    // Derived views in SI units.
    spacetime::LinkGeometry link_geometry() const;
    double coherence_time() const { return spectral.coherence_time_ps * 1e-12; }
    link::BeamParams beam() const;
    stats::RateModel rate_model() const;
    stats::TurbulenceModel turbulence_model() const;
    stats::SensitivityScenario sensitivity_scenario() const;
    stats::PassConfig pass_config() const;
    stats::G2Config g2_config() const;
};

/// Throws ParseError (with line/column) or ValidationError (every failed guard).
ScenarioConfig load_config(const std::string& path);
ScenarioConfig load_config_string(const std::string& text);

/// Checks every guard; returns the list of violations (empty when valid).
std::vector<std::string> validate(const ScenarioConfig& c);

/// Stable key=value rendering of every field, used for hashing.
std::string canonical_form(const ScenarioConfig& c);
std::string config_hash(const ScenarioConfig& c);

std::string sha256_hex(const std::string& bytes);

}  // namespace qsim::config
