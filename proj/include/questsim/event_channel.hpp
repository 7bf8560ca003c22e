#pragma once

// Event-operator channel as an optical circuit: copy the input into ancilla
// modes, displace the copy, mix mode 1 with its copy on a beamsplitter of
// reflectivity xi, apply channel losses, and trace the copy away.

#include <vector>

#include "questsim/fock.hpp"

namespace qsim::channel {

using fock::Complex;

/// gamma = alpha1 (1 - sqrt(xi) - sqrt(1 - xi)) / sqrt(1 - xi).
/// Throws SingularParameter at xi == 1, where the formula is 0/0.
Complex event_gamma(double xi, Complex alpha1);

struct ChannelParams {
    double xi = 1.0;
    double eta1 = 1.0;
    double eta2 = 1.0;
};

enum class InputKind { spdc, coherent, polarization_spdc };

struct ChannelInput {
    InputKind kind = InputKind::spdc;
    Complex chi{0.1, 0.0};
    Complex alpha{0.0, 0.0};
    Complex beta{0.0, 0.0};
    /// 0 selects a cutoff automatically.
    int cutoff = 0;
    fock::SpdcModel model = fock::SpdcModel::first_order;
    double chi_guard = fock::kChiGuard;
};

/// First-order closed-form predictions for the same configuration.
struct AnalyticSummary {
    double coincidence = 0.0;  ///< xi eta1 eta2 |chi|^2 / (1+|chi|^2) for pair sources
    double singles1 = 0.0;
    double singles2 = 0.0;
    double same_polarization = 0.0;
    double cross_polarization_bound = 0.0;
};

struct ChannelResult {
    fock::DensityState reduced;
    Complex gamma;
    int cutoff;
    double coincidence;
    double singles1;
    double singles2;
    double same_polarization;   ///< only for polarization input
    double cross_polarization;  ///< only for polarization input
    double leakage;
    AnalyticSummary analytic;
};

/// Automatic cutoff for an input: enough headroom for the displacement guard
/// and for the pair-number tail of the chosen SPDC model.
int select_cutoff(const ChannelInput& input, const ChannelParams& params);

ChannelResult run_event_channel(const ChannelInput& input, const ChannelParams& params);

/// |<Pi_C>_delta - <Pi_C>_0| after a phase exp(-i delta n) on every mode whose
/// label starts with the first character of mode_j.
double phase_delay_invariance_check(const fock::DensityState& rho, double delta, std::string_view mode_i = "1",
                                    std::string_view mode_j = "2");

struct VerificationRow {
    double chi;
    double xi;
    double eta1;
    double eta2;
    double coincidence;
    double analytic;
    double deviation;
    double bound;
    double singles1;
    double singles_drift;  ///< |<Pi_1>(xi) - <Pi_1>(1)|
};

/// Sweeps the oracle over a (chi, xi, eta1, eta2) grid and compares against the
/// closed form. Singles drift is measured against the xi = 1 run at equal chi, eta.
std::vector<VerificationRow> verify_grid(const std::vector<double>& chis, const std::vector<double>& xis,
                                         const std::vector<double>& etas, fock::SpdcModel model);

}  // namespace qsim::channel
