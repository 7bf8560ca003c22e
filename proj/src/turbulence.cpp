#include <algorithm>
#include <cmath>

#include "questsim/counting_stats.hpp"
#include "questsim/errors.hpp"

namespace qsim::stats {

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

double lognormal_factor(double si, Rng& rng) {
    if (!(si >= 0.0)) throw InvalidArgument("scintillation index must be non-negative");
    if (si == 0.0) return 1.0;
    const double s2 = std::log1p(si);
    std::lognormal_distribution<double> d(-0.5 * s2, std::sqrt(s2));
    return d(rng);
}

std::string_view source_name(Source s) {
    switch (s) {
        case Source::epps: return "EPPS";
        case Source::fps: return "FPS";
        case Source::dark_cal: return "dark-cal";
        case Source::background_cal: return "background-cal";
        case Source::link_cal: return "link-cal";
        case Source::switching: return "switching";
    }
    return "unknown";
}

double noise_factor(const RateModel& rates, const TurbulenceModel& turb, Rng& rng) {
    if (rates.noise_distribution == NoiseDistribution::poisson) return 1.0;
    return lognormal_factor(turb.si * turb.si, rng);
}

namespace {

std::uint64_t poisson(double mean, Rng& rng) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<std::uint64_t> d(mean);
    return d(rng);
}

std::uint64_t binomial(std::uint64_t n, double p, Rng& rng) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    std::binomial_distribution<std::uint64_t> d(n, p);
    return d(rng);
}

bool signal_on(Source s) { return s == Source::epps || s == Source::fps || s == Source::link_cal; }

}  // namespace

CountRecord simulate_slots(const RateModel& rates, const std::vector<double>& factors, double slot_duration,
                           Source source, double decoherence, double noise_mod, Rng& rng, double window_start) {
    if (!(slot_duration >= 0.0)) throw InvalidArgument("slot duration must be non-negative");
    if (!(decoherence >= 0.0 && decoherence <= 1.0)) throw InvalidArgument("decoherence must lie in [0, 1]");
    CountRecord r{};
    r.window_start = window_start;
    r.duration = slot_duration * static_cast<double>(factors.size());
    r.source = source;
    r.turbulence_cells = static_cast<int>(factors.size());
    r.noise_factor = noise_mod;
    r.decoherence = source == Source::epps ? decoherence : 1.0;
    if (source == Source::switching || r.duration == 0.0) return r;

    double fsum = 0.0;
    std::uint64_t signal = 0;
    std::uint64_t pairs = 0;
    const double p_herald = rates.intrinsic_heralding * r.decoherence;
    if (signal_on(source)) {
        for (double f : factors) {
            fsum += f;
            const std::uint64_t n = poisson(rates.space_signal_rate() * f * slot_duration, rng);
            signal += n;
            pairs += binomial(n, p_herald, rng);
        }
        r.singles_ground = poisson(rates.ground_singles_rate * r.duration, rng);
        r.turbulence_factor = fsum / static_cast<double>(factors.size());
    }
    const double noise_rate = source == Source::dark_cal ? rates.space_dark_per_detector * rates.space_detectors
                                                         : rates.space_noise_rate();
    const std::uint64_t noise = poisson(noise_rate * noise_mod * r.duration, rng);
    r.singles_space = signal + noise;
    r.accidentals = poisson(static_cast<double>(r.singles_ground) * static_cast<double>(r.singles_space) *
                                rates.coincidence_window / r.duration,
                            rng);
    r.coincidences = pairs + r.accidentals;
    return r;
}

CountRecord simulate_window(const RateModel& rates, const TurbulenceModel& turb, double duration, Source source,
                            double decoherence, Rng& rng, double window_start) {
    if (!(duration > 0.0)) throw InvalidArgument("window duration must be positive");
    if (!(turb.correlation_window > 0.0)) throw InvalidArgument("correlation window must be positive");
    const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil(duration / turb.correlation_window - 1e-9)));
    std::vector<double> factors(cells);
    for (auto& f : factors) f = lognormal_factor(turb.si, rng);
    const double nf = noise_factor(rates, turb, rng);
    return simulate_slots(rates, factors, duration / static_cast<double>(cells), source, decoherence, nf, rng,
                          window_start);
}

ExpectedCounts expected_counts(const RateModel& rates, double duration, double decoherence) {
    ExpectedCounts e{};
    e.space_signal = rates.space_signal_rate() * duration;
    e.space_noise = rates.space_noise_rate() * duration;
    e.coincidences_true = e.space_signal * rates.intrinsic_heralding * decoherence;
    e.singles_ground = rates.ground_singles_rate * duration;
    e.accidentals = accidental_rate(rates.ground_singles_rate, rates.space_singles_rate(), rates.coincidence_window) *
                    duration;
    return e;
}

}  // namespace qsim::stats
