#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "questsim/counting_stats.hpp"
#include "questsim/errors.hpp"
#include "questsim/spacetime.hpp"

using namespace qsim;
using namespace qsim::stats;

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }
double var(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
}

}  // namespace

TEST_CASE("streams are reproducible and distinct") {
    Rng a = make_stream(42, 0), b = make_stream(42, 0), c = make_stream(42, 1), d = make_stream(43, 0);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
}

TEST_CASE("log-normal factor moments") {
    Rng rng = make_stream(1, 0);
    for (double si : {0.01, 0.05, 0.2}) {
        std::vector<double> v(200000);
        for (auto& x : v) x = lognormal_factor(si, rng);
        CHECK(mean(v) == doctest::Approx(1.0).epsilon(0.003));
        CHECK(var(v) == doctest::Approx(si).epsilon(0.05));
        CHECK(*std::min_element(v.begin(), v.end()) > 0.0);
    }
    CHECK(lognormal_factor(0.0, rng) == 1.0);
    CHECK_THROWS_AS(lognormal_factor(-0.1, rng), InvalidArgument);
}

TEST_CASE("noise factor has relative deviation s_i") {
    Rng rng = make_stream(2, 0);
    RateModel r;
    TurbulenceModel t;
    std::vector<double> v(200000);
    for (auto& x : v) x = noise_factor(r, t, rng);
    CHECK(std::sqrt(var(v)) == doctest::Approx(t.si).epsilon(0.02));
    r.noise_distribution = NoiseDistribution::poisson;
    CHECK(noise_factor(r, t, rng) == 1.0);
}

TEST_CASE("rate model arithmetic") {
    RateModel r;
    CHECK(r.space_signal_rate() == doctest::Approx(350e6 * std::pow(10.0, -4.6)));
    CHECK(r.true_pair_rate() == doctest::Approx(1758.4).epsilon(1e-3));
    CHECK(r.space_singles_rate() == doctest::Approx(20792).epsilon(1e-3));
    CHECK(accidental_rate(2e5, 2e4, 1e-9) == doctest::Approx(4.0));
    CHECK(heralding_efficiency(100, 400, 100) == doctest::Approx(0.5));
    CHECK_THROWS_AS(heralding_efficiency(1, 0, 1), UndefinedEstimate);
}

TEST_CASE("bin collisions and data volume") {
    const double p = bin_collision_probability(2.28e8, 225e-12);
    CHECK(p == doctest::Approx(0.05).epsilon(0.01));
    CHECK(bin_collision_rate(p, 225e-12) == doctest::Approx(2.28e8).epsilon(1e-9));
    CHECK(bin_collision_probability(0.0, 1e-9) == 0.0);
    const double mission = 182.625 * 86400.0;
    CHECK(data_volume(1.5e9, 10, 0.00165, mission) == doctest::Approx(390e12).epsilon(0.01));
    CHECK(data_volume(250000, 10, 0.05, mission) == doctest::Approx(2e12).epsilon(0.02));
}

TEST_CASE("expected counts and simulated windows agree") {
    RateModel r;
    TurbulenceModel t;
    Rng rng = make_stream(3, 0);
    const double dur = 0.4, d = 0.53;
    const auto e = expected_counts(r, dur, d);
    std::vector<double> c, s1, s2;
    for (int i = 0; i < 400; ++i) {
        const auto rec = simulate_window(r, t, dur, Source::epps, d, rng);
        c.push_back(rec.coincidences);
        s1.push_back(rec.singles_ground);
        s2.push_back(rec.singles_space);
        CHECK(rec.turbulence_cells == 40);
        CHECK(rec.accidentals <= rec.coincidences);
    }
    CHECK(mean(c) == doctest::Approx(e.coincidences_true + e.accidentals).epsilon(0.02));
    CHECK(mean(s1) == doctest::Approx(e.singles_ground).epsilon(0.01));
    CHECK(mean(s2) == doctest::Approx(e.space_signal + e.space_noise).epsilon(0.01));
}

TEST_CASE("record heralding subtracts accidentals and nominal noise") {
    RateModel r;
    CountRecord rec;
    rec.duration = 1.0;
    rec.singles_ground = 200000;
    rec.singles_space = 21000;
    rec.coincidences = 1000;
    const double acc = 200000.0 * 21000.0 * 1e-9;
    CHECK(record_heralding(rec, r) == doctest::Approx((1000 - acc) / std::sqrt(200000.0 * (21000.0 - 12000.0))));
    rec.singles_space = 100;
    CHECK_THROWS_AS(record_heralding(rec, r), UndefinedEstimate);
}

TEST_CASE("common-mode variance model matches the oracle") {
    RateModel r;
    TurbulenceModel t;
    oracle::Rates o;
    for (double noise : {0.0, 1000.0, 6000.0})
        for (double d : {0.53, 0.48}) {
            r.space_noise_per_detector = noise;
            o.si = t.si;
            CHECK(heralding_relative_variance(r, t, 1.0, d, VarianceModel::common_mode_rejected) ==
                  doctest::Approx(oracle::relvar(o, noise, d)).epsilon(1e-12));
        }
    CHECK(heralding_relative_variance(r, t, 1.0, 0.5, VarianceModel::full, 100) >
          heralding_relative_variance(r, t, 1.0, 0.5, VarianceModel::full, 1000) - 1e-15);
    CHECK_THROWS_AS(heralding_relative_variance(r, t, 0.0, 0.5, VarianceModel::full), InvalidArgument);
}

TEST_CASE("full variance model tracks the simulated spread") {
    RateModel r;
    TurbulenceModel t;
    Rng rng = make_stream(4, 0);
    std::vector<CountRecord> recs;
    for (int i = 0; i < 300; ++i) recs.push_back(simulate_window(r, t, 1.0, Source::epps, 0.53, rng));
    const auto se = heralding_standard_error(recs, r, t, VarianceModel::full);
    CHECK(se.mean == doctest::Approx(0.2 * 0.53 * std::sqrt(r.space_signal_rate() / r.ground_singles_rate)).epsilon(0.02));
    CHECK(se.propagated == doctest::Approx(se.empirical).epsilon(0.25));
    recs.front().source = Source::fps;
    CHECK_THROWS_AS(heralding_standard_error(recs, r, t), InvalidArgument);
}

TEST_CASE("noise tolerance agrees with a grid-scan oracle") {
    SensitivityScenario s;
    s.baseline_df = spacetime::decoherence({}, 0.8e-12).xi;
    oracle::Rates o;
    for (double p : {2e8, 3.5e8, 8e8})
        for (double delta : {0.05, 0.04, 0.025}) {
            s.rates.pair_production_rate = p;
            o.pair = p;
            const double ref = oracle::noise_tolerance_scan(o, s.baseline_df, delta);
            const auto nt = max_tolerable_noise(s, delta);
            CHECK(nt.noise_per_detector == doctest::Approx(ref).epsilon(2e-3));
        }
    s.rates.pair_production_rate = 3.5e8;
    CHECK(max_tolerable_noise(s, 0.05).noise_per_detector == doctest::Approx(10625).epsilon(0.01));
    CHECK(max_tolerable_noise(s, 0.025).noise_per_detector == doctest::Approx(937).epsilon(0.01));
    CHECK_FALSE(max_tolerable_noise(s, 0.01).resolvable_at_zero_noise);
}

TEST_CASE("noise tolerance properties") {
    SensitivityScenario s;
    double prev = 0.0;
    for (double p : {1e8, 2e8, 4e8, 8e8}) {
        s.rates.pair_production_rate = p;
        const double n = max_tolerable_noise(s, 0.04).noise_per_detector;
        CHECK(n >= prev);
        prev = n;
    }
    s.rates.pair_production_rate = 3.5e8;
    CHECK(max_tolerable_noise(s, 0.05).noise_per_detector > max_tolerable_noise(s, 0.04).noise_per_detector);
    CHECK_FALSE(resolvable(0.0, s));
    CHECK_THROWS_AS(resolvable(0.6, s), InvalidArgument);

    const double pstar = pair_rate_for_noise(s, 0.04, 2000.0);
    s.rates.pair_production_rate = pstar;
    CHECK(max_tolerable_noise(s, 0.04).noise_per_detector == doctest::Approx(2000.0).epsilon(1e-3));
}

TEST_CASE("welch test against a reference value") {
    const auto w = welch_test({1, 2, 3, 4, 5}, {2, 4, 6, 8, 10, 12});
    CHECK(w.t == doctest::Approx(-2.3763541031440183).epsilon(1e-10));
    CHECK(w.dof == doctest::Approx(6.972255729794934).epsilon(1e-10));
    CHECK(w.p_value == doctest::Approx(0.04928433820673049).epsilon(1e-8));
}

TEST_CASE("g2 histogram peak") {
    RateModel r;
    G2Config c;
    c.duration = 5.0;
    c.delay = 3e-9;
    Rng rng = make_stream(5, 0);
    const auto h = g2_histogram(r, 1.0, c, rng);
    CHECK(h.bins.size() == 2000);
    CHECK(h.peak_center == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::abs(h.peak_center) < 0.2e-9);
    CHECK(h.peak_sigma == doctest::Approx(std::hypot(2e-9, 0.2e-9)).epsilon(0.15));
    const double expected = r.true_pair_rate() * c.duration * std::erf(4.0 / std::sqrt(2.0));
    CHECK(std::abs(h.peak_area - expected) < 4 * h.peak_area_se);
    const double floor = r.ground_singles_rate * r.space_singles_rate() * c.bin_width * c.duration;
    CHECK(h.floor_per_bin == doctest::Approx(floor).epsilon(0.02));
    c.bin_width = 5e-12;
    CHECK_THROWS_AS(g2_histogram(r, 1.0, c, rng), InvalidArgument);
}

TEST_CASE("pass simulation") {
    PassConfig cfg;
    cfg.passes = 4;
    const auto a = simulate_pass(cfg, 99);
    const auto b = simulate_pass(cfg, 99);
    CHECK(a.curve.size() == 77);
    CHECK(a.records.size() == 77 * 6);
    CHECK(a.epps_pass_means == b.epps_pass_means);
    double ratio = 0.0, df = 0.0;
    for (const auto& p : a.curve) {
        ratio += p.epps_mean / p.fps_mean;
        df += p.decoherence;
    }
    CHECK(ratio / a.curve.size() == doctest::Approx(df / a.curve.size()).epsilon(0.03));
    CHECK(a.curve.front().decoherence < a.curve[38].decoherence);
    cfg.schedule.epps = 0.39;
    CHECK_THROWS_AS(simulate_pass(cfg, 1), InvalidArgument);
}
