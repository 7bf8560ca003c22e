#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "questsim/link_budget.hpp"
#include "questsim/errors.hpp"

using namespace qsim;
using namespace qsim::link;
using oracle::deg;

TEST_CASE("dB conversions round-trip") {
    for (double t : {1.0, 0.5, 1e-3, 2.5e-5}) CHECK(from_db(to_db(t)) == doctest::Approx(t).epsilon(1e-12));
    CHECK(to_db(1.0) == 0.0);
}

TEST_CASE("atmospheric loss scales with airmass") {
    CHECK(atmospheric_loss_db(0.0, 3.5) == doctest::Approx(3.5));
    CHECK(atmospheric_loss_db(37 * deg, 3.5) == doctest::Approx(4.38).epsilon(1e-3));
    CHECK(atmospheric_loss_db(37 * deg, 3.5) < 4.5);
    CHECK_THROWS_AS(atmospheric_loss_db(75 * deg, 3.5), InvalidArgument);
}

TEST_CASE("diffraction spot") {
    const double w0 = 0.065;
    const double w = std::sqrt(w0 * w0 + std::pow(830e-9 * 400e3 / (std::numbers::pi * w0), 2));
    CHECK(diffraction_spot_diameter(0.13, 400e3, 830e-9, SpotConvention::e2) == doctest::Approx(2 * w));
    CHECK(diffraction_spot_diameter(0.13, 400e3, 830e-9) == doctest::Approx(std::sqrt(2 * std::log(2.0)) * w));
    CHECK(diffraction_spot_diameter(0.13, 530e3, 830e-9) < 2.6);
    const double a = diffraction_spot_diameter(0.13, 1000e3, 830e-9);
    CHECK(diffraction_spot_diameter(0.13, 2000e3, 830e-9) == doctest::Approx(2 * a).epsilon(1e-3));
    CHECK(diffraction_spot_diameter(0.26, 2000e3, 830e-9) == doctest::Approx(a).epsilon(1e-2));
}

TEST_CASE("turbulent spot and aperture optimum") {
    CHECK(turbulent_spot_diameter(0.13, 1e6, 530e3, 830e-9) ==
          doctest::Approx(diffraction_spot_diameter(0.13, 530e3, 830e-9)).epsilon(1e-9));
    const double s = turbulent_spot_diameter(0.13, 0.15, 530e3, 830e-9);
    CHECK(s >= 2.5);
    CHECK(s <= 4.5);
    CHECK(turbulent_spot_diameter(0.13, 0.30, 530e3, 830e-9) < s);
    const auto o = optimal_tx_diameter(0.15, 530e3, 830e-9);
    CHECK(o.unimodal);
    CHECK(o.diameter >= 0.08);
    CHECK(o.diameter <= 0.20);
    CHECK(o.diameter == doctest::Approx(1.096 * 0.15).epsilon(0.01));
    double prev = 0.0;
    for (double r0 : {0.1, 0.2, 0.3, 0.5}) {
        const double d = optimal_tx_diameter(r0, 530e3, 830e-9).diameter;
        CHECK(d >= prev - 1e-3);
        prev = d;
    }
    CHECK(optimal_tx_diameter(0.15, 1000e3, 830e-9).diameter == doctest::Approx(o.diameter).epsilon(0.01));
}

TEST_CASE("clipping loss") {
    const double w = oracle::e2_radius(4.5);
    CHECK(w == doctest::Approx(3.822).epsilon(1e-3));
    const double c = clipping_loss_db(w, 0.235, 0.35);
    CHECK(c == doctest::Approx(oracle::clipping_db(w, 0.235, 0.35)));
    CHECK(c >= 26.0);
    CHECK(c <= 28.0);
    CHECK(clipping_loss_db(0.01, 1.0, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(clipping_loss_db(w, 0.1175, 0.35) - c == doctest::Approx(6.02).epsilon(0.01));
    CHECK_THROWS_AS(clipping_loss_db(w, 0.235, 0.6), InvalidArgument);
}

TEST_CASE("pointing loss") {
    const double w = oracle::e2_radius(4.5);
    CHECK(pointing_loss_db(0.0, 500e3, w) == 0.0);
    for (double j : {10e-6, 15e-6}) {
        const double p = pointing_loss_db(j, 500e3, w);
        CHECK(p == doctest::Approx(oracle::pointing_db(j, 500e3, w)));
    }
    CHECK(std::abs(pointing_loss_db(10e-6, 500e3, w) - 6.0) <= 2.0);
    CHECK(pointing_loss_db(12e-6, 500e3, w) > pointing_loss_db(10e-6, 500e3, w));
}

TEST_CASE("optics and totals") {
    CHECK(optics_loss_db(0.6, 0.7, 0.6, 0.7) == doctest::Approx(7.535).epsilon(1e-4));
    CHECK(optics_loss_db(0.6, 0.7, 0.75, 0.7) == doctest::Approx(6.566).epsilon(1e-4));
    CHECK(optics_loss_db(1, 1, 1, 1) == 0.0);
    const LossComponents worst{4.5, 28, 6, 7.5};
    CHECK(worst.total_db() == doctest::Approx(46.0));
    const LossComponents best{3.5, 26, 6, 6.5};
    CHECK(best.total_db() == doctest::Approx(42.0));
    CHECK(LossComponents{}.transmission() == 1.0);
}

TEST_CASE("worst-case link at the edge of the pass") {
    BeamParams b;
    b.beam_fwhm_override = 4.5;
    const auto l = evaluate_link(b, 400e3, 37 * deg);
    const double w = oracle::e2_radius(4.5);
    const double L = oracle::slant(400e3, 37 * deg);
    const double ref = 3.5 / std::cos(37 * deg) + oracle::clipping_db(w, 0.235, 0.35) +
                       oracle::pointing_db(10e-6, L, w) + oracle::db(0.6 * 0.7 * 0.6 * 0.7);
    CHECK(l.losses.total_db() == doctest::Approx(ref).epsilon(1e-10));
    CHECK(std::abs(l.losses.total_db() - 46.0) <= 0.5);
}
