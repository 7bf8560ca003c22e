#pragma once

#include <string>
#include <vector>

#include "questsim/counting_stats.hpp"

namespace qsim::aging {

struct TableRow {
    double temp_c;
    double rate;  // 1/s
};

/// rate(T, F) = (intrinsic + damage * F / F_anchor) * exp(beta (T - T_anchor)),
/// damage = anchor_rate - intrinsic.
struct ApdModel {
    std::string name;
    double beta;            // 1/degC
    double anchor_temp;     // degC
    double anchor_rate;     // 1/s at anchor_temp and anchor_fluence
    double anchor_fluence;  // protons/cm^2
    double intrinsic_rate;  // 1/s, undamaged at anchor_temp
};

struct MissionEnvironment {
    double fluence_two_year = 5e8;   // protons/cm^2, 100 MeV equivalent
    double ddd_two_year = 1.27e6;    // MeV/g
    double two_years_s = 2.0 * 365.25 * 86400.0;
};

/// Least-squares fit of ln(rate) against temperature; anchored on the warmest row.
ApdModel calibrate_apd(const std::string& name, const std::vector<TableRow>& rows, double anchor_fluence = 5e8,
                       double intrinsic_rate = 100.0);

/// Built-in end-of-life temperature table for the three APD types.
struct TableEntry {
    std::string name;
    std::vector<TableRow> rows;
};
const std::vector<TableEntry>& reference_table();
std::vector<ApdModel> reference_models(double intrinsic_rate = 100.0);
ApdModel reference_model(const std::string& name, double intrinsic_rate = 100.0);

double fluence_at_time(double t_seconds, const MissionEnvironment& env = {});

double dark_count_rate(const ApdModel& m, double temp_c, double fluence);

/// Inverts dark_count_rate for temperature. Targets at or below the intrinsic
/// rate are rejected.
double temperature_for_target(const ApdModel& m, double target_rate, double fluence);

/// ln(factor) / beta
double reserve_margin(const ApdModel& m, double reserve_factor);

/// Tolerable noise for the given resolution minus dark counts accrued by time t,
/// clipped at zero.
double max_background(double t_seconds, double pair_rate, double temp_c, const ApdModel& m,
                      const stats::SensitivityScenario& scenario, double delta_df,
                      const MissionEnvironment& env = {});

}  // namespace qsim::aging
