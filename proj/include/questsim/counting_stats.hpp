#pragma once

// Photon counting under turbulence: rate model, per-window Monte Carlo,
// heralding estimators, g2 synthesis and the noise-tolerance solver.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace qsim::stats {

using Rng = std::mt19937_64;

/// Independent generator for one (seed, stream) pair.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

struct TurbulenceModel {
    double si = 0.05;
    double correlation_window = 10e-3;  // s
};

/// Mean-1, variance-si log-normal draw; si == 0 returns 1 without drawing.
double lognormal_factor(double si, Rng& rng);

enum class NoiseDistribution { poisson, lognormal };

enum class Source { epps, fps, dark_cal, background_cal, link_cal, switching };
std::string_view source_name(Source s);

struct RateModel {
    double pair_production_rate = 350e6;  // 1/s at the source
    double intrinsic_heralding = 0.2;
    double link_transmission = 2.5118864315095797e-05;  // 46 dB
    double ground_singles_rate = 2e5;                    // 1/s
    double space_noise_per_detector = 6000.0;            // 1/s, dark + background
    double space_dark_per_detector = 100.0;              // 1/s, part of the above
    int space_detectors = 2;
    double coincidence_window = 1e-9;  // s
    NoiseDistribution noise_distribution = NoiseDistribution::lognormal;

    double space_signal_rate() const { return pair_production_rate * link_transmission; }
    double space_noise_rate() const { return space_noise_per_detector * space_detectors; }
    double space_singles_rate() const { return space_signal_rate() + space_noise_rate(); }
    /// Coincidences from genuine pairs before decoherence.
    double true_pair_rate() const { return space_signal_rate() * intrinsic_heralding; }
};

struct CountRecord {
    double window_start = 0.0;
    double duration = 0.0;
    Source source = Source::switching;
    std::uint64_t singles_ground = 0;
    std::uint64_t singles_space = 0;
    std::uint64_t coincidences = 0;  ///< includes accidentals
    std::uint64_t accidentals = 0;
    double turbulence_factor = 1.0;  ///< duration-weighted mean signal factor
    int turbulence_cells = 1;        ///< independent signal factors drawn
    double noise_factor = 1.0;
    double decoherence = 1.0;
};

/// Multiplicative factor on the noise of one record. Relative standard
/// deviation s_i, so noise counts have Var(N) = N + (s_i N)^2.
double noise_factor(const RateModel& rates, const TurbulenceModel& turb, Rng& rng);

/// One record of the given duration. Signal turbulence is drawn once per
/// correlation window with variance s_i; noise is modulated once per record.
CountRecord simulate_window(const RateModel& rates, const TurbulenceModel& turb, double duration, Source source,
                            double decoherence, Rng& rng, double window_start = 0.0);

/// Same, with the signal factors supplied: slot k lasts slot_duration and sees
/// factors[k]. Used to interleave sources under one turbulence realization.
CountRecord simulate_slots(const RateModel& rates, const std::vector<double>& factors, double slot_duration,
                           Source source, double decoherence, double noise_factor, Rng& rng,
                           double window_start = 0.0);

double heralding_efficiency(double coincidences, double singles1, double singles2);
double accidental_rate(double s1_rate, double s2_rate, double coincidence_window);
double bin_collision_probability(double local_rate, double bin_width);
/// Rate giving the requested collision probability in one bin.
double bin_collision_rate(double probability, double bin_width);
double data_volume(double tag_rate, double bytes_per_tag, double duty_cycle, double mission_seconds);

/// Heralding estimate from one record: accidentals subtracted using the
/// measured singles, nominal noise subtracted from the space singles.
double record_heralding(const CountRecord& r, const RateModel& rates);

enum class VarianceModel {
    /// Turbulence on the signal treated as common mode (cancelled against the
    /// interleaved reference), no pair covariance.
    common_mode_rejected,
    /// Includes signal scintillation averaged over correlation windows and the
    /// coincidence/singles covariance.
    full,
};

struct ExpectedCounts {
    double coincidences_true;
    double accidentals;
    double singles_ground;
    double space_signal;
    double space_noise;
};

ExpectedCounts expected_counts(const RateModel& rates, double duration, double decoherence);

/// Relative variance of the heralding estimate, first-order propagated from
/// Var(N) = N + (s_i N)^2 on each count class. `cells` is the number of
/// independent signal turbulence factors in the record (full model only).
double heralding_relative_variance(const RateModel& rates, const TurbulenceModel& turb, double duration,
                                   double decoherence, VarianceModel model, int cells = 1);

struct StandardError {
    double mean;
    double propagated;
    double empirical;  ///< std dev of per-record estimates / sqrt(n)
};

/// Requires at least two records with the same source and duration.
StandardError heralding_standard_error(const std::vector<CountRecord>& records, const RateModel& rates,
                                       const TurbulenceModel& turb, VarianceModel model = VarianceModel::full);

struct SensitivityScenario {
    RateModel rates;
    TurbulenceModel turbulence;
    double integration_time = 1.0;  // s per compared condition
    double baseline_df = 0.5304870;  // D_f of the reference condition
    VarianceModel model = VarianceModel::common_mode_rejected;
};

/// Gap delta * E0 against confidence * sqrt(SE_A^2 + SE_B^2), with
/// D_A = baseline_df and D_B = baseline_df - delta.
bool resolvable(double delta_df, const SensitivityScenario& s, double confidence_sigmas = 1.0);

struct NoiseTolerance {
    double noise_per_detector;  ///< 0 when unresolvable at any noise
    bool resolvable_at_zero_noise;
};

/// Bisection on the per-detector noise rate to 1e-4 relative.
NoiseTolerance max_tolerable_noise(const SensitivityScenario& s, double delta_df, double confidence_sigmas = 1.0);

/// Pair production rate at which the tolerable noise equals the given rate.
double pair_rate_for_noise(const SensitivityScenario& s, double delta_df, double noise_per_detector,
                           double confidence_sigmas = 1.0);

// -- g2 ---------------------------------------------------------------------

struct G2Config {
    double jitter_space_sigma = 2e-9;
    double jitter_ground_sigma = 0.2e-9;
    double bin_width = 100e-12;
    double span = 200e-9;
    double duration = 10.0;
    double delay = 0.0;  ///< space minus ground arrival offset of true pairs
};

struct G2Histogram {
    double bin_width;
    double span;
    std::vector<std::uint64_t> bins;
    std::uint64_t total;
    double peak_center;
    double peak_sigma;
    double peak_area;  ///< floor-subtracted counts within +-4 sigma
    double peak_area_se;
    double floor_per_bin;
    double floor_se;
    std::uint64_t singles_ground;
    std::uint64_t singles_space;

    double bin_center(std::size_t i) const { return -0.5 * span + (static_cast<double>(i) + 0.5) * bin_width; }
};

/// Synthesizes time tags and histograms ground-to-space arrival differences.
/// Decohered pairs keep their space photon but at an uncorrelated time.
G2Histogram g2_histogram(const RateModel& rates, double decoherence, const G2Config& cfg, Rng& rng);

// -- pass -------------------------------------------------------------------

struct Utilization {
    double dark_cal = 0.05;
    double background_cal = 0.15;
    double link_cal = 0.10;
    double fps = 0.29;
    double epps = 0.40;
    double switching = 0.01;

    double sum() const { return dark_cal + background_cal + link_cal + fps + epps + switching; }
};

struct PassConfig {
    RateModel rates;
    TurbulenceModel turbulence;
    Utilization schedule;
    double altitude = 400e3;
    double max_zenith = 0.6457718232379019;  // 37 deg
    double coherence_time = 0.8e-12;
    double integration_time = 1.0;
    int passes = 16;
    bool force_unit_decoherence = false;
};

/// Means are over the pass ensemble; standard errors are per single pass.
struct PassPoint {
    double time_s;
    double zenith_rad;
    double decoherence;
    double epps_mean;
    double fps_mean;
    double epps_se_propagated;
    double fps_se_propagated;
    double epps_se_empirical;
    double fps_se_empirical;
};

struct PassResult {
    std::vector<CountRecord> records;  ///< first pass only
    std::vector<PassPoint> curve;      ///< per integration window, averaged over passes
    std::vector<double> epps_pass_means;
    std::vector<double> fps_pass_means;
};

PassResult simulate_pass(const PassConfig& cfg, std::uint64_t seed);

struct TwoSample {
    double t;
    double dof;
    double p_value;
};

/// Welch two-sided test.
TwoSample welch_test(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace qsim::stats
