#include "questsim/spacetime.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "questsim/errors.hpp"

namespace qsim::spacetime {

namespace {

void check_zenith(double theta) {
    if (!(theta >= 0.0 && theta < std::numbers::pi / 2)) throw InvalidArgument("zenith angle must lie in [0, pi/2)");
}

}  // namespace

double time_dilation(const LinkGeometry& g, double rel_tol) {
    check_zenith(g.zenith_rad);
    if (!(g.altitude_m >= 0.0)) throw InvalidArgument("altitude must be non-negative");
    if (!(g.earth_mass_length_m / g.earth_radius_m < 1e-8)) throw InvalidArgument("m / r_e must be < 1e-8");
    if (!(rel_tol > 0.0)) throw InvalidArgument("quadrature tolerance must be positive");
    if (g.altitude_m == 0.0) return 0.0;

    const double m = g.earth_mass_length_m;
    const double re = g.earth_radius_m;
    const double t2 = std::pow(std::tan(g.zenith_rad), 2);
    auto f = [&](double r) { return (m / r) * std::sqrt(1.0 + 2.0 * m / r + re * re * t2 / (r * r)); };

    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, re, re + g.altitude_m, 15, rel_tol, &err);
    if (!std::isfinite(v) || err > rel_tol * std::abs(v)) {
        std::ostringstream os;
        os << "time-dilation quadrature did not converge: value " << v << ", error estimate " << err
           << ", requested relative tolerance " << rel_tol;
        throw NumericError(os.str());
    }
    return v / g.light_speed;
}

double zenith_time_dilation_approx(const LinkGeometry& g) {
    return g.earth_mass_length_m * g.altitude_m / (g.earth_radius_m * g.light_speed);
}

double event_overlap(double delta_t, double coherence_time) {
    if (!(coherence_time > 0.0)) throw InvalidArgument("coherence time must be positive");
    const double kappa = delta_t / coherence_time;
    return std::exp(-0.5 * kappa * kappa);
}

double decoherence_factor(double xi, double eta1, double eta2) {
    for (double v : {xi, eta1, eta2})
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("decoherence_factor inputs must lie in [0, 1]");
    return eta1 * eta2 * xi;
}

DecoherenceResult decoherence(const LinkGeometry& geom, double coherence_time, double eta1, double eta2) {
    DecoherenceResult r{};
    r.delta_t = time_dilation(geom);
    r.kappa = r.delta_t / coherence_time;
    r.xi = event_overlap(r.delta_t, coherence_time);
    r.d_f = decoherence_factor(r.xi, eta1, eta2);
    return r;
}

double slant_range(double h, double theta, double re) {
    check_zenith(theta);
    const double c = std::cos(theta);
    return std::sqrt(re * re * c * c + 2.0 * re * h + h * h) - re * c;
}

namespace {

double orbital_rate(double radius, double mass_length) {
    const double gm = mass_length * kLightSpeed * kLightSpeed;
    return std::sqrt(gm / (radius * radius * radius));
}

}  // namespace

PassSample pass_sample_at(double h, double t, double re, double mass_length) {
    if (!(h > 0.0)) throw InvalidArgument("altitude must be positive");
    const double radius = re + h;
    const double omega = orbital_rate(radius, mass_length);
    const double phi = omega * t;
    const double x = radius * std::sin(phi);
    const double y = radius * std::cos(phi) - re;
    const double l2 = x * x + y * y;
    const double rate = omega * (radius * radius - re * radius * std::cos(phi)) / l2;
    return {t, std::abs(std::atan2(x, y)), std::sqrt(l2), rate};
}

PassProfile overhead_pass_profile(double h, double max_zenith, int samples, double re, double mass_length) {
    if (!(max_zenith > 0.0 && max_zenith <= 80.0 * std::numbers::pi / 180.0))
        throw InvalidArgument("max zenith must lie in (0, 80 deg]");
    if (samples < 2) throw InvalidArgument("a pass profile needs at least two samples");
    if (!(h > 0.0)) throw InvalidArgument("altitude must be positive");

    const double radius = re + h;
    const double omega = orbital_rate(radius, mass_length);
    // Earth-central angle at which the satellite reaches max_zenith.
    const double phi_max = max_zenith - std::asin(re * std::sin(max_zenith) / radius);
    const double half = phi_max / omega;

    PassProfile p{};
    p.samples.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i)
        p.samples.push_back(pass_sample_at(h, -half + 2.0 * half * i / (samples - 1), re, mass_length));
    p.peak_angular_rate = omega * radius / h;
    p.duration_s = 2.0 * half;
    return p;
}

double required_fiber_length(double processing_time, double group_index) {
    if (!(processing_time >= 0.0)) throw InvalidArgument("processing time must be non-negative");
    if (!(group_index >= 1.0)) throw InvalidArgument("group index must be >= 1");
    return processing_time * kLightSpeed / group_index;
}

bool spacelike_separated(double gap, double separation, double c) { return c * std::abs(gap) < separation; }

double calibrated_bandwidth_factor() {
    constexpr double dt = 0.8e-12;
    constexpr double lambda = 830e-9;
    constexpr double width = 2e-9;
    return width * kLightSpeed * dt / (lambda * lambda);
}

double bandwidth_factor(BandwidthConvention convention) {
    switch (convention) {
        case BandwidthConvention::reciprocal: return 1.0;
        case BandwidthConvention::gaussian_fwhm: return 2.0 * std::numbers::ln2 / std::numbers::pi;
        case BandwidthConvention::calibrated: return calibrated_bandwidth_factor();
    }
    return 1.0;
}

double coherence_bandwidth(double dt, double lambda, BandwidthConvention convention) {
    if (!(dt > 0.0)) throw InvalidArgument("coherence time must be positive");
    return bandwidth_factor(convention) * lambda * lambda / (kLightSpeed * dt);
}

}  // namespace qsim::spacetime
