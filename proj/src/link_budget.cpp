#include "questsim/link_budget.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "questsim/errors.hpp"
#include "questsim/spacetime.hpp"

namespace qsim::link {

namespace {

const double kFwhmPerRadius = std::sqrt(2.0 * std::numbers::ln2);

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be positive");
}

double diameter_in(double w, SpotConvention c) { return c == SpotConvention::fwhm ? kFwhmPerRadius * w : 2.0 * w; }

double diffraction_radius(double tx_diameter, double range, double wavelength) {
    const double w0 = 0.5 * tx_diameter;
    const double zr = std::numbers::pi * w0 * w0 / wavelength;
    return w0 * std::sqrt(1.0 + (range / zr) * (range / zr));
}

double turbulent_radius(double d, double r0, double range, double wavelength) {
    return diffraction_radius(d, range, wavelength) * std::exp(0.515 * std::pow(d / r0, 5.0 / 3.0));
}

}  // namespace

double to_db(double t) {
    if (!(t > 0.0)) throw InvalidArgument("transmission must be positive to express in dB");
    return -10.0 * std::log10(t);
}

double from_db(double db) { return std::pow(10.0, -db / 10.0); }

double atmospheric_loss_db(double theta, double zenith_loss_db) {
    if (!(theta >= 0.0 && theta <= 70.0 * std::numbers::pi / 180.0))
        throw InvalidArgument("zenith angle must lie in [0, 70 deg] for the airmass model");
    if (!(zenith_loss_db >= 0.0)) throw InvalidArgument("zenith loss must be non-negative");
    return zenith_loss_db / std::cos(theta);
}

double fwhm_from_e2_radius(double w) { return kFwhmPerRadius * w; }
double e2_radius_from_fwhm(double fwhm) { return fwhm / kFwhmPerRadius; }

double diffraction_spot_diameter(double tx_diameter, double range, double wavelength, SpotConvention c) {
    require_positive(tx_diameter, "transmit diameter");
    require_positive(range, "range");
    require_positive(wavelength, "wavelength");
    return diameter_in(diffraction_radius(tx_diameter, range, wavelength), c);
}

double turbulent_spot_diameter(double tx_diameter, double r0, double range, double wavelength, SpotConvention c) {
    require_positive(tx_diameter, "transmit diameter");
    require_positive(r0, "Fried parameter");
    require_positive(range, "range");
    require_positive(wavelength, "wavelength");
    return diameter_in(turbulent_radius(tx_diameter, r0, range, wavelength), c);
}

ApertureOptimum optimal_tx_diameter(double r0, double range, double wavelength) {
    if (!(r0 >= 0.1 && r0 <= 0.5)) throw InvalidArgument("Fried parameter must lie in [0.1, 0.5] m");
    require_positive(range, "range");
    require_positive(wavelength, "wavelength");
    constexpr double lo = 0.02;
    constexpr double hi = 1.0;
    auto f = [&](double d) { return turbulent_radius(d, r0, range, wavelength); };

    ApertureOptimum out{};
    constexpr int n = 197;
    std::vector<double> ds(n), ws(n);
    for (int i = 0; i < n; ++i) {
        ds[i] = lo + (hi - lo) * i / (n - 1);
        ws[i] = f(ds[i]);
    }
    int direction_changes = 0;
    for (int i = 2; i < n; ++i)
        if ((ws[i] - ws[i - 1]) * (ws[i - 1] - ws[i - 2]) < 0.0) ++direction_changes;
    out.unimodal = direction_changes <= 1;
    if (!out.unimodal) {
        out.scan_diameters = ds;
        for (double w : ws) out.scan_spots.push_back(fwhm_from_e2_radius(w));
    }

    // Golden section to 1 mm.
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-3) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    out.diameter = 0.5 * (a + b);
    out.spot_diameter = fwhm_from_e2_radius(f(out.diameter));
    return out;
}

double clipping_loss_db(double w, double aperture, double obscuration) {
    require_positive(w, "beam radius");
    require_positive(aperture, "receive aperture");
    if (!(obscuration >= 0.0 && obscuration <= 0.5)) throw InvalidArgument("obscuration must lie in [0, 0.5]");
    const double a = 0.5 * aperture;
    const double t = (1.0 - obscuration * obscuration) * -std::expm1(-2.0 * a * a / (w * w));
    return to_db(t);
}

double pointing_loss_db(double jitter, double range, double w) {
    if (!(jitter >= 0.0)) throw InvalidArgument("pointing jitter must be non-negative");
    require_positive(range, "range");
    require_positive(w, "beam radius");
    const double sigma = jitter * range;
    return to_db(w * w / (w * w + 2.0 * sigma * sigma));
}

double optics_loss_db(double det, double tx, double window, double rx) {
    for (double v : {det, tx, window, rx})
        if (!(v > 0.0 && v <= 1.0)) throw InvalidArgument("optical transmissions must lie in (0, 1]");
    return to_db(det * tx * window * rx);
}

LinkBudget evaluate_link(const BeamParams& b, double altitude, double zenith) {
    LinkBudget r{};
    r.range = spacetime::slant_range(altitude, zenith);
    r.beam_fwhm = b.beam_fwhm_override > 0.0
                      ? b.beam_fwhm_override
                      : turbulent_spot_diameter(b.tx_diameter, b.fried_r0, r.range, b.wavelength);
    r.beam_e2_radius = e2_radius_from_fwhm(r.beam_fwhm);
    r.losses.atmospheric_db = atmospheric_loss_db(zenith, b.zenith_loss_db);
    r.losses.clipping_db = clipping_loss_db(r.beam_e2_radius, b.rx_aperture, b.obscuration);
    r.losses.pointing_db = pointing_loss_db(b.pointing_jitter, r.range, r.beam_e2_radius);
    r.losses.optics_db = optics_loss_db(b.det_eff, b.tx_transmission, b.window_transmission, b.rx_transmission);
    return r;
}

}  // namespace qsim::link
