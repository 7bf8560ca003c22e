#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "questsim/errors.hpp"
#include "questsim/spacetime.hpp"

using namespace qsim;
using namespace qsim::spacetime;
using oracle::deg;

namespace {
LinkGeometry geo(double h, double th = 0.0) {
    LinkGeometry g;
    g.altitude_m = h;
    g.zenith_rad = th;
    return g;
}
}  // namespace

TEST_CASE("time dilation agrees with a Simpson oracle") {
    for (double h : {200e3, 400e3, 431e3, 1000e3})
        for (double th : {0.0, 22.5, 37.0, 60.0}) {
            const double v = time_dilation(geo(h, th * deg));
            CHECK(v == doctest::Approx(oracle::time_dilation(h, th * deg)).epsilon(1e-9));
        }
    CHECK(time_dilation(geo(0.0)) == 0.0);
}

TEST_CASE("time dilation at 400 km and the closed form") {
    const double v = time_dilation(geo(400e3));
    CHECK(v == doctest::Approx(9.00815e-13).epsilon(1e-5));
    const double approx = zenith_time_dilation_approx(geo(400e3));
    CHECK(approx == doctest::Approx(oracle::m * 400e3 / (oracle::re * oracle::c)));
    for (double h : {200e3, 300e3, 400e3, 500e3}) {
        const double ratio = time_dilation(geo(h)) / zenith_time_dilation_approx(geo(h));
        CHECK(ratio >= 0.95);
        CHECK(ratio <= 1.0);
    }
}

TEST_CASE("time dilation is monotone and inside the secant envelope") {
    double prev = 0.0;
    for (double h = 200e3; h <= 1000e3; h += 50e3) {
        const double v = time_dilation(geo(h));
        CHECK(v > prev);
        prev = v;
    }
    for (double h : {200e3, 350e3, 500e3}) {
        double p = 0.0;
        for (double th = 0.0; th <= 60.0; th += 5.0) {
            const double v = time_dilation(geo(h, th * deg));
            CHECK(v > p);
            CHECK(v <= oracle::m / (oracle::re * oracle::c) * h / std::cos(th * deg) * 1.05);
            p = v;
        }
    }
}

TEST_CASE("time dilation guards") {
    CHECK_THROWS_AS(time_dilation(geo(400e3, std::numbers::pi / 2)), InvalidArgument);
    CHECK_THROWS_AS(time_dilation(geo(-1.0)), InvalidArgument);
    CHECK_THROWS_AS(time_dilation(geo(400e3), 0.0), InvalidArgument);
}

TEST_CASE("event overlap and decoherence") {
    CHECK(event_overlap(0.0, 1e-12) == 1.0);
    CHECK(event_overlap(1e-12, 1e-12) == doctest::Approx(std::exp(-0.5)));
    CHECK_THROWS_AS(event_overlap(1e-12, 0.0), InvalidArgument);
    const auto r = decoherence(geo(400e3), 0.8e-12, 0.9, 0.8);
    CHECK(r.xi == doctest::Approx(0.530487).epsilon(1e-5));
    CHECK(r.xi == doctest::Approx(std::exp(-0.5 * r.kappa * r.kappa)));
    CHECK(r.d_f == doctest::Approx(0.72 * r.xi));
    CHECK(decoherence_factor(0.5, 1.0, 1.0) == 0.5);
    CHECK_THROWS_AS(decoherence_factor(1.2, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("decoherence anchors") {
    const double dt = 0.8e-12;
    CHECK(oracle::d_f(400e3, 0, dt) - oracle::d_f(431e3, 0, dt) == doctest::Approx(0.050).epsilon(0.14));
    auto df = [](double h, double th, double d) { return decoherence(geo(h, th * deg), d).d_f; };
    CHECK(std::abs(df(400e3, 0, dt) - df(431e3, 0, dt) - 0.050) <= 0.007);
    CHECK(std::abs(df(400e3, 0, dt) - df(415e3, 0, dt) - 0.025) <= 0.005);
    CHECK(std::abs(df(400e3, 0, 0.864e-12) - df(400e3, 0, dt) - 0.050) <= 0.007);
    CHECK(std::abs(df(400e3, 0, dt) - df(400e3, 22.5, dt) - 0.051) <= 0.005);
    for (double h : {400e3, 431e3})
        CHECK(df(h, 0, dt) == doctest::Approx(oracle::d_f(h, 0, dt)).epsilon(1e-8));
}

TEST_CASE("slant range") {
    CHECK(slant_range(400e3, 0.0) == doctest::Approx(400e3));
    CHECK(slant_range(400e3, 37 * deg) == doctest::Approx(oracle::slant(400e3, 37 * deg)));
    CHECK(slant_range(400e3, 37 * deg) < 530e3);
    CHECK(slant_range(400e3, 37 * deg) == doctest::Approx(493e3).epsilon(0.01));
    double prev = 0.0;
    for (double th = 0; th < 80; th += 5) {
        CHECK(slant_range(400e3, th * deg) > prev);
        prev = slant_range(400e3, th * deg);
    }
}

TEST_CASE("overhead pass") {
    const auto p = overhead_pass_profile(400e3, 37 * deg, 101);
    CHECK(p.peak_angular_rate / deg == doctest::Approx(1.1).epsilon(0.15 / 1.1));
    CHECK(p.duration_s >= 10.0);
    CHECK(p.duration_s <= 300.0);
    const auto& s = p.samples;
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s[i].zenith_rad == doctest::Approx(s[s.size() - 1 - i].zenith_rad).epsilon(1e-9));
        CHECK(s[i].zenith_rad <= 37 * deg + 1e-9);
        CHECK(s[i].range_m == doctest::Approx(oracle::slant(400e3, s[i].zenith_rad)).epsilon(1e-9));
    }
}

TEST_CASE("ground delay and causal separation") {
    CHECK(required_fiber_length(1e-6, 1.5) == doctest::Approx(199.86).epsilon(1e-3));
    CHECK(required_fiber_length(0.0, 1.5) == 0.0);
    CHECK(spacelike_separated(1e-6, 400e3));
    CHECK_FALSE(spacelike_separated(1e-2, 400e3));
}

TEST_CASE("coherence bandwidth") {
    const double a = coherence_bandwidth(0.8e-12, 830e-9);
    CHECK(a == doctest::Approx(2e-9).epsilon(1e-9));
    CHECK(coherence_bandwidth(1.6e-12, 830e-9) == doctest::Approx(a / 2));
    CHECK(coherence_bandwidth(3e-12, 830e-9) == doctest::Approx(0.5e-9).epsilon(0.1));
    CHECK(coherence_bandwidth(0.8e-12, 830e-9, BandwidthConvention::reciprocal) ==
          doctest::Approx(830e-9 * 830e-9 / (oracle::c * 0.8e-12)));
}
