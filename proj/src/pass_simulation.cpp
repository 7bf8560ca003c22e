#include <algorithm>
#include <cmath>
#include <numeric>

#include "questsim/counting_stats.hpp"
#include "questsim/errors.hpp"
#include "questsim/spacetime.hpp"

namespace qsim::stats {

namespace {

double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double n = static_cast<double>(v.size());
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / (n - 1.0));
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

}  // namespace

PassResult simulate_pass(const PassConfig& cfg, std::uint64_t seed) {
    if (std::abs(cfg.schedule.sum() - 1.0) > 1e-9) throw InvalidArgument("utilization fractions must sum to 1");
    if (cfg.passes < 2) throw InvalidArgument("pass simulation needs at least two passes");
    if (!(cfg.integration_time > 0.0)) throw InvalidArgument("integration time must be positive");

    const double duration = spacetime::overhead_pass_profile(cfg.altitude, cfg.max_zenith, 2).duration_s;
    const auto windows = static_cast<std::size_t>(std::floor(duration / cfg.integration_time));
    if (windows == 0) throw InvalidArgument("pass shorter than one integration window");
    const auto cells = static_cast<std::size_t>(
        std::max(1.0, std::round(cfg.integration_time / cfg.turbulence.correlation_window)));
    const double cell = cfg.integration_time / static_cast<double>(cells);

    struct Slot {
        Source source;
        double fraction;
    };
    const Slot slots[] = {{Source::dark_cal, cfg.schedule.dark_cal},
                          {Source::background_cal, cfg.schedule.background_cal},
                          {Source::link_cal, cfg.schedule.link_cal},
                          {Source::fps, cfg.schedule.fps},
                          {Source::epps, cfg.schedule.epps},
                          {Source::switching, cfg.schedule.switching}};

    PassResult out;
    std::vector<double> dfs(windows), times(windows), zeniths(windows);
    for (std::size_t w = 0; w < windows; ++w) {
        times[w] = -0.5 * duration + (static_cast<double>(w) + 0.5) * cfg.integration_time;
        zeniths[w] = spacetime::pass_sample_at(cfg.altitude, times[w]).zenith_rad;
        dfs[w] = cfg.force_unit_decoherence
                     ? 1.0
                     : spacetime::decoherence({cfg.altitude, zeniths[w]}, cfg.coherence_time).xi;
    }

    std::vector<std::vector<double>> epps(windows), fps(windows);
    for (int p = 0; p < cfg.passes; ++p) {
        Rng rng = make_stream(seed, static_cast<std::uint64_t>(p));
        std::vector<double> pe, pf;
        for (std::size_t w = 0; w < windows; ++w) {
            std::vector<double> factors(cells);
            for (auto& f : factors) f = lognormal_factor(cfg.turbulence.si, rng);
            double start = times[w] - 0.5 * cfg.integration_time;
            for (const Slot& s : slots) {
                const double nf = noise_factor(cfg.rates, cfg.turbulence, rng);
                CountRecord r =
                    simulate_slots(cfg.rates, factors, s.fraction * cell, s.source, dfs[w], nf, rng, start);
                start += r.duration;
                if (s.source == Source::epps) {
                    epps[w].push_back(record_heralding(r, cfg.rates));
                    pe.push_back(epps[w].back());
                } else if (s.source == Source::fps) {
                    fps[w].push_back(record_heralding(r, cfg.rates));
                    pf.push_back(fps[w].back());
                }
                if (p == 0) out.records.push_back(r);
            }
        }
        out.epps_pass_means.push_back(mean(pe));
        out.fps_pass_means.push_back(mean(pf));
    }

    const int icells = static_cast<int>(cells);
    for (std::size_t w = 0; w < windows; ++w) {
        PassPoint pt{};
        pt.time_s = times[w];
        pt.zenith_rad = zeniths[w];
        pt.decoherence = dfs[w];
        pt.epps_mean = mean(epps[w]);
        pt.fps_mean = mean(fps[w]);
        const double te = cfg.schedule.epps * cfg.integration_time;
        const double tf = cfg.schedule.fps * cfg.integration_time;
        pt.epps_se_propagated =
            pt.epps_mean *
            std::sqrt(heralding_relative_variance(cfg.rates, cfg.turbulence, te, dfs[w], VarianceModel::full, icells));
        pt.fps_se_propagated =
            pt.fps_mean *
            std::sqrt(heralding_relative_variance(cfg.rates, cfg.turbulence, tf, 1.0, VarianceModel::full, icells));
        pt.epps_se_empirical = sample_sd(epps[w]);
        pt.fps_se_empirical = sample_sd(fps[w]);
        out.curve.push_back(pt);
    }
    return out;
}

}  // namespace qsim::stats
