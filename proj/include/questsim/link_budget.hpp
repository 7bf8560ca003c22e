#pragma once

#include <vector>

namespace qsim::link {

double to_db(double transmission);
double from_db(double loss_db);

/// zenith_loss_db * sec(theta), theta in [0, 70 deg].
double atmospheric_loss_db(double zenith_rad, double zenith_loss_db);

enum class SpotConvention { fwhm, e2 };

/// FWHM diameter = sqrt(2 ln 2) * e^-2 radius.
double fwhm_from_e2_radius(double w);
double e2_radius_from_fwhm(double fwhm_diameter);

/// Gaussian beam launched with waist D/2.
double diffraction_spot_diameter(double tx_diameter, double range, double wavelength,
                                 SpotConvention convention = SpotConvention::fwhm);

/// Long-term spot with a tilt-included Strehl penalty on the transmit aperture:
/// w = w_diff * exp(0.515 (D/r0)^(5/3)).
double turbulent_spot_diameter(double tx_diameter, double r0, double range, double wavelength,
                               SpotConvention convention = SpotConvention::fwhm);

struct ApertureOptimum {
    double diameter;
    double spot_diameter;  ///< FWHM at the optimum
    bool unimodal;
    std::vector<double> scan_diameters;  ///< filled when the objective is not unimodal
    std::vector<double> scan_spots;
};

/// Golden-section search over D in [2 cm, 1 m] to 1 mm.
ApertureOptimum optimal_tx_diameter(double r0, double range, double wavelength);

/// (1 - obsc^2)(1 - exp(-2 a^2 / w^2)) with a = aperture/2, w = e^-2 radius.
double clipping_loss_db(double beam_e2_radius, double rx_aperture, double obscuration);

/// w^2 / (w^2 + 2 sigma^2), sigma = jitter * range.
double pointing_loss_db(double jitter_rad, double range, double beam_e2_radius);

double optics_loss_db(double det_eff, double tx_transmission, double window_transmission, double rx_transmission);

struct LossComponents {
    double atmospheric_db = 0.0;
    double clipping_db = 0.0;
    double pointing_db = 0.0;
    double optics_db = 0.0;

    double total_db() const { return atmospheric_db + clipping_db + pointing_db + optics_db; }
    double transmission() const { return from_db(total_db()); }
};

struct BeamParams {
    double wavelength = 830e-9;
    double tx_diameter = 0.13;
    double fried_r0 = 0.15;
    double pointing_jitter = 10e-6;
    double rx_aperture = 0.235;
    double obscuration = 0.35;
    /// Beam FWHM at the receiver. Zero selects the turbulent spot model.
    double beam_fwhm_override = 0.0;
    double zenith_loss_db = 3.5;
    double det_eff = 0.6;
    double tx_transmission = 0.7;
    double window_transmission = 0.6;
    double rx_transmission = 0.7;
};

struct LinkBudget {
    LossComponents losses;
    double range;
    double beam_fwhm;
    double beam_e2_radius;
};

/// Every component evaluated for one slant geometry.
LinkBudget evaluate_link(const BeamParams& beam, double altitude, double zenith_rad);

}  // namespace qsim::link
