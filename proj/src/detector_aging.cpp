#include "questsim/detector_aging.hpp"

#include <algorithm>
#include <cmath>

#include "questsim/errors.hpp"

namespace qsim::aging {

ApdModel calibrate_apd(const std::string& name, const std::vector<TableRow>& rows, double anchor_fluence,
                       double intrinsic_rate) {
    if (rows.size() < 2) throw CalibrationError(name + ": need at least two calibration rows");
    std::vector<TableRow> sorted = rows;
    std::sort(sorted.begin(), sorted.end(), [](const TableRow& a, const TableRow& b) { return a.temp_c < b.temp_c; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].temp_c == sorted[i - 1].temp_c) throw CalibrationError(name + ": duplicate calibration temperature");
        if (!(sorted[i].rate > sorted[i - 1].rate)) throw CalibrationError(name + ": rates must rise with temperature");
    }
    for (const auto& r : sorted)
        if (!(r.rate > 0.0)) throw CalibrationError(name + ": rates must be positive");
    if (!(anchor_fluence > 0.0)) throw CalibrationError(name + ": anchor fluence must be positive");

    const double n = static_cast<double>(sorted.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : sorted) {
        const double y = std::log(r.rate);
        sx += r.temp_c;
        sy += y;
        sxx += r.temp_c * r.temp_c;
        sxy += r.temp_c * y;
    }
    const double beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    ApdModel m{name, beta, sorted.back().temp_c, sorted.back().rate, anchor_fluence, intrinsic_rate};
    if (!(intrinsic_rate >= 0.0 && intrinsic_rate < m.anchor_rate))
        throw CalibrationError(name + ": intrinsic rate must lie below the anchor rate");
    return m;
}

const std::vector<TableEntry>& reference_table() {
    static const std::vector<TableEntry> table = {
        {"SLiK", {{-57.4, 200.0}, {-42.7, 660.0}, {-29.1, 2000.0}}},
        {"C30921SH", {{-81.5, 200.0}, {-65.1, 660.0}, {-49.8, 2000.0}}},
        {"SAP500", {{-95.6, 200.0}, {-77.1, 660.0}, {-59.9, 2000.0}}},
    };
    return table;
}

std::vector<ApdModel> reference_models(double intrinsic_rate) {
    std::vector<ApdModel> out;
    for (const auto& e : reference_table()) out.push_back(calibrate_apd(e.name, e.rows, 5e8, intrinsic_rate));
    return out;
}

ApdModel reference_model(const std::string& name, double intrinsic_rate) {
    for (const auto& e : reference_table())
        if (e.name == name) return calibrate_apd(e.name, e.rows, 5e8, intrinsic_rate);
    throw InvalidArgument("unknown APD model '" + name + "'");
}

double fluence_at_time(double t, const MissionEnvironment& env) {
    if (!(t >= 0.0)) throw InvalidArgument("mission time must be non-negative");
    return t / env.two_years_s * env.fluence_two_year;
}

double dark_count_rate(const ApdModel& m, double temp_c, double fluence) {
    if (!(temp_c >= -100.0 && temp_c <= 20.0)) throw InvalidArgument("temperature must lie in [-100, 20] degC");
    if (!(fluence >= 0.0)) throw InvalidArgument("fluence must be non-negative");
    const double damage = m.anchor_rate - m.intrinsic_rate;
    return (m.intrinsic_rate + damage * fluence / m.anchor_fluence) * std::exp(m.beta * (temp_c - m.anchor_temp));
}

double temperature_for_target(const ApdModel& m, double target, double fluence) {
    if (!(target > m.intrinsic_rate))
        throw UnreachableTarget(m.name + ": target dark rate must exceed the intrinsic rate");
    if (!(fluence >= 0.0)) throw InvalidArgument("fluence must be non-negative");
    const double at_anchor = m.intrinsic_rate + (m.anchor_rate - m.intrinsic_rate) * fluence / m.anchor_fluence;
    return m.anchor_temp + std::log(target / at_anchor) / m.beta;
}

double reserve_margin(const ApdModel& m, double factor) {
    if (!(factor >= 1.0)) throw InvalidArgument("reserve factor must be >= 1");
    return std::log(factor) / m.beta;
}

double max_background(double t, double pair_rate, double temp_c, const ApdModel& m,
                      const stats::SensitivityScenario& scenario, double delta, const MissionEnvironment& env) {
    stats::SensitivityScenario s = scenario;
    s.rates.pair_production_rate = pair_rate;
    const double budget = stats::max_tolerable_noise(s, delta).noise_per_detector;
    return std::max(0.0, budget - dark_count_rate(m, temp_c, fluence_at_time(t, env)));
}

}  // namespace qsim::aging
