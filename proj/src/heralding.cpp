#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "questsim/counting_stats.hpp"
#include "questsim/errors.hpp"

namespace qsim::stats {

double heralding_efficiency(double c, double s1, double s2) {
    if (!(s1 > 0.0) || !(s2 > 0.0)) throw UndefinedEstimate("heralding efficiency needs non-zero singles");
    return c / std::sqrt(s1 * s2);
}

double accidental_rate(double s1, double s2, double tau) { return s1 * s2 * tau; }

double bin_collision_probability(double rate, double bin) {
    if (!(rate >= 0.0) || !(bin >= 0.0)) throw InvalidArgument("rate and bin width must be non-negative");
    return -std::expm1(-rate * bin);
}

double bin_collision_rate(double p, double bin) {
    if (!(p >= 0.0 && p < 1.0)) throw InvalidArgument("probability must lie in [0, 1)");
    if (!(bin > 0.0)) throw InvalidArgument("bin width must be positive");
    return -std::log1p(-p) / bin;
}

double data_volume(double rate, double bytes, double duty, double seconds) {
    if (!(rate >= 0.0 && bytes >= 0.0 && duty >= 0.0 && duty <= 1.0 && seconds >= 0.0))
        throw InvalidArgument("data volume inputs must be non-negative with duty in [0, 1]");
    return rate * bytes * duty * seconds;
}

double record_heralding(const CountRecord& r, const RateModel& rates) {
    if (!(r.duration > 0.0)) throw UndefinedEstimate("record has zero duration");
    const double s1 = static_cast<double>(r.singles_ground);
    const double s2 = static_cast<double>(r.singles_space);
    const double acc = s1 * s2 * rates.coincidence_window / r.duration;
    const double s2_signal = s2 - rates.space_noise_rate() * r.duration;
    if (!(s1 > 0.0) || !(s2_signal > 0.0)) throw UndefinedEstimate("record has no signal singles to herald against");
    return (static_cast<double>(r.coincidences) - acc) / std::sqrt(s1 * s2_signal);
}

double heralding_relative_variance(const RateModel& rates, const TurbulenceModel& turb, double duration,
                                   double decoherence, VarianceModel model, int cells) {
    if (!(duration > 0.0)) throw InvalidArgument("duration must be positive");
    if (cells < 1) throw InvalidArgument("cells must be >= 1");
    const ExpectedCounts e = expected_counts(rates, duration, decoherence);
    const double c = e.coincidences_true;
    if (!(c > 0.0) || !(e.singles_ground > 0.0) || !(e.space_signal > 0.0))
        throw UndefinedEstimate("no expected heralded pairs");
    const double si = turb.si;
    const double a = e.accidentals;
    const double s2 = e.space_signal;
    const double n = e.space_noise;
    const double noise_mod = rates.noise_distribution == NoiseDistribution::lognormal ? (si * n) * (si * n) : 0.0;

    double vc, vs2, cov;
    if (model == VarianceModel::common_mode_rejected) {
        vc = c + a + (si * a) * (si * a);
        vs2 = s2 + n + noise_mod;
        cov = 0.0;
    } else {
        const double vf = si / cells;
        vc = c + a + c * c * vf;
        vs2 = s2 + n + s2 * s2 * vf + noise_mod;
        cov = c + c * s2 * vf;
    }
    return vc / (c * c) + 0.25 / e.singles_ground + 0.25 * vs2 / (s2 * s2) - cov / (c * s2);
}

StandardError heralding_standard_error(const std::vector<CountRecord>& records, const RateModel& rates,
                                       const TurbulenceModel& turb, VarianceModel model) {
    if (records.size() < 2) throw UndefinedEstimate("standard error needs at least two records");
    const CountRecord& first = records.front();
    std::vector<double> e;
    e.reserve(records.size());
    for (const auto& r : records) {
        if (r.source != first.source || std::abs(r.duration - first.duration) > 1e-12 * first.duration)
            throw InvalidArgument("records must share source and duration");
        e.push_back(record_heralding(r, rates));
    }
    const double n = static_cast<double>(e.size());
    const double mean = std::accumulate(e.begin(), e.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : e) ss += (v - mean) * (v - mean);
    StandardError out{};
    out.mean = mean;
    out.empirical = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    const double rv = heralding_relative_variance(rates, turb, first.duration, first.decoherence, model,
                                                  first.turbulence_cells);
    out.propagated = std::abs(mean) * std::sqrt(rv) / std::sqrt(n);
    return out;
}

TwoSample welch_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) throw InvalidArgument("two-sample test needs at least two values per sample");
    auto moments = [](const std::vector<double>& x) {
        const double n = static_cast<double>(x.size());
        const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
        double ss = 0.0;
        for (double v : x) ss += (v - m) * (v - m);
        return std::pair{m, ss / (n - 1.0)};
    };
    const auto [ma, va] = moments(a);
    const auto [mb, vb] = moments(b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double qa = va / na;
    const double qb = vb / nb;
    TwoSample r{};
    if (qa + qb == 0.0) {
        r.t = 0.0;
        r.dof = na + nb - 2.0;
        r.p_value = ma == mb ? 1.0 : 0.0;
        return r;
    }
    r.t = (ma - mb) / std::sqrt(qa + qb);
    r.dof = (qa + qb) * (qa + qb) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    boost::math::students_t dist(r.dof);
    r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
    return r;
}

}  // namespace qsim::stats
