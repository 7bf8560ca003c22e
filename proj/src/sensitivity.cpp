#include <cmath>

#include "questsim/counting_stats.hpp"
#include "questsim/errors.hpp"

namespace qsim::stats {

namespace {

double weighted_variance(const SensitivityScenario& s, double d) {
    return d * d * heralding_relative_variance(s.rates, s.turbulence, s.integration_time, d, s.model);
}

}  // namespace

bool resolvable(double delta, const SensitivityScenario& s, double k) {
    if (!(delta >= 0.0 && delta < 1.0)) throw InvalidArgument("delta D_f must lie in [0, 1)");
    if (!(s.baseline_df > 0.0 && s.baseline_df <= 1.0)) throw InvalidArgument("baseline D_f must lie in (0, 1]");
    if (delta == 0.0) return false;
    const double da = s.baseline_df;
    const double db = da - delta;
    if (!(db > 0.0)) throw InvalidArgument("delta D_f exceeds the baseline decoherence factor");
    return delta >= k * std::sqrt(weighted_variance(s, da) + weighted_variance(s, db));
}

NoiseTolerance max_tolerable_noise(const SensitivityScenario& s, double delta, double k) {
    if (!(s.rates.pair_production_rate > 0.0)) throw InvalidArgument("pair production rate must be positive");
    SensitivityScenario probe = s;
    auto ok = [&](double noise) {
        probe.rates.space_noise_per_detector = noise;
        return resolvable(delta, probe, k);
    };
    if (!ok(0.0)) return {0.0, false};
    double lo = 0.0;
    double hi = 1e4;
    while (ok(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e13) throw NumericError("noise tolerance did not bracket below 1e13 /s");
    }
    while (hi - lo > 1e-4 * hi) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return {lo, true};
}

double pair_rate_for_noise(const SensitivityScenario& s, double delta, double noise, double k) {
    SensitivityScenario probe = s;
    probe.rates.space_noise_per_detector = noise;
    auto ok = [&](double rate) {
        probe.rates.pair_production_rate = rate;
        return resolvable(delta, probe, k);
    };
    double lo = std::log(1e4);
    double hi = std::log(1e13);
    if (ok(std::exp(lo))) return std::exp(lo);
    if (!ok(std::exp(hi))) throw UnreachableTarget("no pair rate below 1e13 /s tolerates the requested noise");
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (ok(std::exp(mid)) ? hi : lo) = mid;
    }
    return std::exp(hi);
}

}  // namespace qsim::stats
