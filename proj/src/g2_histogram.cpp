#include <algorithm>
#include <cmath>

#include "questsim/counting_stats.hpp"
#include "questsim/errors.hpp"

namespace qsim::stats {

namespace {

std::uint64_t poisson(double mean, Rng& rng) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<std::uint64_t> d(mean);
    return d(rng);
}

}  // namespace

G2Histogram g2_histogram(const RateModel& rates, double decoherence, const G2Config& cfg, Rng& rng) {
    if (!(cfg.bin_width >= 10e-12)) throw InvalidArgument("g2 bin width must be >= 10 ps");
    if (!(cfg.bin_width <= cfg.span / 10.0)) throw InvalidArgument("g2 bin width must be <= span / 10");
    if (!(cfg.duration > 0.0)) throw InvalidArgument("g2 duration must be positive");
    if (!(decoherence >= 0.0 && decoherence <= 1.0)) throw InvalidArgument("decoherence must lie in [0, 1]");

    const double t = cfg.duration;
    const double pair_rate = rates.true_pair_rate();
    // Counts first, so singles do not depend on the decoherence draws below.
    const std::uint64_t n_pairs = poisson(pair_rate * t, rng);
    const std::uint64_t n_ground = poisson(std::max(0.0, rates.ground_singles_rate - pair_rate) * t, rng);
    const std::uint64_t n_space = poisson((rates.space_signal_rate() - pair_rate + rates.space_noise_rate()) * t, rng);

    std::uniform_real_distribution<double> when(0.0, t);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> jg(0.0, cfg.jitter_ground_sigma);
    std::normal_distribution<double> js(0.0, cfg.jitter_space_sigma);

    std::vector<double> ground;
    std::vector<double> space;
    ground.reserve(n_pairs + n_ground);
    space.reserve(n_pairs + n_space);
    for (std::uint64_t i = 0; i < n_pairs; ++i) {
        const double emit = when(rng);
        ground.push_back(emit + jg(rng));
        if (unit(rng) < decoherence)
            space.push_back(emit + cfg.delay + js(rng));
        else
            space.push_back(when(rng));
    }
    for (std::uint64_t i = 0; i < n_ground; ++i) ground.push_back(when(rng));
    for (std::uint64_t i = 0; i < n_space; ++i) space.push_back(when(rng));
    std::sort(space.begin(), space.end());

    G2Histogram h{};
    h.bin_width = cfg.bin_width;
    const auto nbins = static_cast<std::size_t>(std::llround(cfg.span / cfg.bin_width));
    h.span = static_cast<double>(nbins) * cfg.bin_width;
    h.bins.assign(nbins, 0);
    h.singles_ground = ground.size();
    h.singles_space = space.size();
    const double half = 0.5 * h.span;
    for (double g : ground) {
        const double origin = g + cfg.delay;
        auto it = std::lower_bound(space.begin(), space.end(), origin - half);
        for (; it != space.end() && *it < origin + half; ++it) {
            const auto b = static_cast<std::size_t>((*it - origin + half) / cfg.bin_width);
            if (b < nbins) ++h.bins[b];
        }
    }
    h.total = 0;
    for (auto b : h.bins) h.total += b;

    // Floor from bins well outside the expected peak.
    const double sigma_expected = std::hypot(cfg.jitter_space_sigma, cfg.jitter_ground_sigma);
    const double outer = std::max(10.0 * sigma_expected, 0.25 * h.span);
    double floor_sum = 0.0;
    std::size_t floor_bins = 0;
    for (std::size_t i = 0; i < nbins; ++i)
        if (std::abs(h.bin_center(i)) > outer) {
            floor_sum += static_cast<double>(h.bins[i]);
            ++floor_bins;
        }
    if (floor_bins == 0) throw InvalidArgument("g2 span too small to estimate the accidental floor");
    h.floor_per_bin = floor_sum / static_cast<double>(floor_bins);
    h.floor_se = std::sqrt(floor_sum) / static_cast<double>(floor_bins);

    double w = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < nbins; ++i) {
        const double x = h.bin_center(i);
        if (std::abs(x) > 5.0 * sigma_expected) continue;
        const double v = static_cast<double>(h.bins[i]) - h.floor_per_bin;
        w += v;
        m1 += v * x;
        m2 += v * x * x;
    }
    if (w > 0.0) {
        h.peak_center = m1 / w;
        h.peak_sigma = std::sqrt(std::max(0.0, m2 / w - h.peak_center * h.peak_center));
    }

    double raw = 0.0;
    std::size_t peak_bins = 0;
    for (std::size_t i = 0; i < nbins; ++i)
        if (std::abs(h.bin_center(i)) <= 4.0 * sigma_expected) {
            raw += static_cast<double>(h.bins[i]);
            ++peak_bins;
        }
    h.peak_area = raw - h.floor_per_bin * static_cast<double>(peak_bins);
    h.peak_area_se = std::sqrt(raw + std::pow(static_cast<double>(peak_bins) * h.floor_se, 2));
    return h;
}

}  // namespace qsim::stats
