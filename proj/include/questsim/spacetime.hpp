#pragma once

#include <vector>

namespace qsim::spacetime {

inline constexpr double kLightSpeed = 299792458.0;     // m/s
inline constexpr double kEarthRadius = 6.371e6;        // m
inline constexpr double kEarthMassLength = 4.435e-3;   // GM/c^2, m

struct LinkGeometry {
    double altitude_m = 400e3;
    double zenith_rad = 0.0;
    double earth_radius_m = kEarthRadius;
    double earth_mass_length_m = kEarthMassLength;
    double light_speed = kLightSpeed;
};

/// Gravitational time offset between ground and an orbit at the given zenith
/// angle, by adaptive Gauss-Kronrod quadrature. Seconds.
double time_dilation(const LinkGeometry& geom, double rel_tol = 1e-10);

/// m h / (r_e c)
double zenith_time_dilation_approx(const LinkGeometry& geom);

/// exp(-(delta_t/dt)^2 / 2)
double event_overlap(double delta_t, double coherence_time);

double decoherence_factor(double xi, double eta1, double eta2);

struct DecoherenceResult {
    double delta_t;
    double kappa;
    double xi;
    double d_f;
};

DecoherenceResult decoherence(const LinkGeometry& geom, double coherence_time, double eta1 = 1.0, double eta2 = 1.0);

double slant_range(double altitude, double zenith_rad, double earth_radius = kEarthRadius);

struct PassSample {
    double time_s;
    double zenith_rad;
    double range_m;
    double angular_rate;  ///< rad/s, as seen from the ground station
};

struct PassProfile {
    std::vector<PassSample> samples;
    double peak_angular_rate;  ///< rad/s at culmination
    double duration_s;         ///< between first and last sample
};

/// Geometry at time t relative to culmination on the overhead circular orbit.
PassSample pass_sample_at(double altitude, double t, double earth_radius = kEarthRadius,
                          double mass_length = kEarthMassLength);

/// Circular orbit passing through the local zenith; samples are uniform in time
/// and symmetric about culmination.
PassProfile overhead_pass_profile(double altitude, double max_zenith_rad, int samples,
                                  double earth_radius = kEarthRadius, double mass_length = kEarthMassLength);

double required_fiber_length(double processing_time, double group_index);
/// c |dt| < separation
bool spacelike_separated(double event_time_gap, double separation, double c = kLightSpeed);

enum class BandwidthConvention { reciprocal, gaussian_fwhm, calibrated };

/// k such that (0.8 ps, 830 nm) maps to 2 nm.
double calibrated_bandwidth_factor();
double bandwidth_factor(BandwidthConvention convention);
/// k lambda^2 / (c dt), metres.
double coherence_bandwidth(double coherence_time, double wavelength,
                           BandwidthConvention convention = BandwidthConvention::calibrated);

}  // namespace qsim::spacetime
