#include "questsim/event_channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "questsim/errors.hpp"

namespace qsim::channel {

using fock::DensityState;
using fock::TruncatedFockState;

Complex event_gamma(double xi, Complex alpha1) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw InvalidArgument("xi must lie in [0, 1]");
    if (xi == 1.0) throw SingularParameter("event_gamma is undefined at xi = 1");
    const double s = std::sqrt(1.0 - xi);
    return alpha1 * ((1.0 - std::sqrt(xi) - s) / s);
}

namespace {

void check_params(const ChannelParams& p) {
    std::vector<std::string> bad;
    if (!(p.xi >= 0.0 && p.xi <= 1.0)) bad.push_back("xi must lie in [0, 1]");
    if (!(p.eta1 >= 0.0 && p.eta1 <= 1.0)) bad.push_back("eta1 must lie in [0, 1]");
    if (!(p.eta2 >= 0.0 && p.eta2 <= 1.0)) bad.push_back("eta2 must lie in [0, 1]");
    if (!bad.empty()) {
        std::string msg = bad.front();
        for (std::size_t i = 1; i < bad.size(); ++i) msg += "; " + bad[i];
        throw InvalidArgument(msg);
    }
}

Complex gamma_for(const ChannelInput& in, double xi) {
    if (in.kind != InputKind::coherent || xi == 1.0) return {0.0, 0.0};
    return event_gamma(xi, in.alpha);
}

double pair_fraction(Complex chi) { return std::norm(chi) / (1.0 + std::norm(chi)); }

DensityState lose(DensityState rho, const std::vector<std::string>& modes, double eta) {
    if (eta == 1.0) return rho;
    for (const auto& m : modes) rho = fock::apply_loss(rho, m, eta);
    return rho;
}

}  // namespace

int select_cutoff(const ChannelInput& input, const ChannelParams& params) {
    if (input.cutoff > 0) return input.cutoff;
    switch (input.kind) {
        case InputKind::polarization_spdc: return 2;
        case InputKind::spdc: {
            if (input.model == fock::SpdcModel::first_order || std::abs(input.chi) == 0.0) return 2;
            // Smallest cutoff whose discarded pair-number tail is below 1e-15.
            const double per = std::log10(std::norm(input.chi));
            return std::max(2, static_cast<int>(std::ceil(-15.0 / per)) - 1);
        }
        case InputKind::coherent: {
            const Complex g = params.xi < 1.0 ? event_gamma(params.xi, input.alpha) : Complex{};
            const int c = std::max({fock::displacement_cutoff(input.alpha), fock::displacement_cutoff(input.beta),
                                    fock::displacement_cutoff(g), fock::displacement_cutoff(input.alpha + g)});
            return c + 2;
        }
    }
    return 2;
}

ChannelResult run_event_channel(const ChannelInput& input, const ChannelParams& params) {
    check_params(params);
    const int cutoff = select_cutoff(input, params);
    const Complex gamma = gamma_for(input, params.xi);

    TruncatedFockState psi = [&] {
        switch (input.kind) {
            case InputKind::spdc: return fock::spdc_state(input.chi, cutoff, input.model, input.chi_guard);
            case InputKind::coherent: return fock::coherent_pair_state(input.alpha, input.beta, cutoff);
            case InputKind::polarization_spdc: return fock::polarization_spdc_state(input.chi, cutoff, input.chi_guard);
        }
        throw InvalidArgument("unknown input kind");
    }();

    const bool pol = input.kind == InputKind::polarization_spdc;
    const std::vector<std::string> side1 = pol ? std::vector<std::string>{"1H", "1V"} : std::vector<std::string>{"1"};
    const std::vector<std::string> side2 = pol ? std::vector<std::string>{"2H", "2V"} : std::vector<std::string>{"2"};
    std::vector<std::string> keep = side1;
    keep.insert(keep.end(), side2.begin(), side2.end());

    TruncatedFockState joint = fock::duplicate_state(psi);
    if (!pol) joint = fock::apply_displacement(joint, "3", gamma);
    for (const auto& m : side1) {
        std::string copy = m;
        copy.front() = '3';
        joint = fock::apply_event_beamsplitter(joint, m, copy, params.xi);
    }

    DensityState rho = fock::partial_trace(joint, keep);
    rho = lose(std::move(rho), side1, params.eta1);
    rho = lose(std::move(rho), side2, params.eta2);

    ChannelResult r{rho, gamma, cutoff, 0.0, 0.0, 0.0, 0.0, 0.0, rho.leakage(), {}};
    const double eta12 = params.eta1 * params.eta2;
    if (pol) {
        r.same_polarization = fock::coincidence_expectation(rho, "1H", "2H") + fock::coincidence_expectation(rho, "1V", "2V");
        r.cross_polarization = fock::coincidence_expectation(rho, "1H", "2V") + fock::coincidence_expectation(rho, "1V", "2H");
        r.coincidence = r.same_polarization + r.cross_polarization;
        r.singles1 = fock::singles_expectation(rho, "1H") + fock::singles_expectation(rho, "1V");
        r.singles2 = fock::singles_expectation(rho, "2H") + fock::singles_expectation(rho, "2V");
        const double c2 = std::norm(input.chi);
        r.analytic.same_polarization = params.xi * eta12 * c2;
        r.analytic.cross_polarization_bound = 2.0 * c2 * c2;
        r.analytic.coincidence = r.analytic.same_polarization;
        r.analytic.singles1 = params.eta1 * pair_fraction(input.chi);
        r.analytic.singles2 = params.eta2 * pair_fraction(input.chi);
        return r;
    }

    r.coincidence = fock::coincidence_expectation(rho, "1", "2");
    r.singles1 = fock::singles_expectation(rho, "1");
    r.singles2 = fock::singles_expectation(rho, "2");
    if (input.kind == InputKind::spdc) {
        const double f = pair_fraction(input.chi);
        r.analytic.coincidence = params.xi * eta12 * f;
        r.analytic.singles1 = params.eta1 * f;
        r.analytic.singles2 = params.eta2 * f;
    } else {
        r.analytic.singles1 = 1.0 - std::exp(-params.eta1 * std::norm(input.alpha));
        r.analytic.singles2 = 1.0 - std::exp(-params.eta2 * std::norm(input.beta));
        r.analytic.coincidence = r.analytic.singles1 * r.analytic.singles2;
    }
    return r;
}

double phase_delay_invariance_check(const DensityState& rho, double delta, std::string_view mode_i,
                                    std::string_view mode_j) {
    if (mode_j.empty()) throw InvalidArgument("mode_j must be named");
    const double before = fock::coincidence_expectation(rho, mode_i, mode_j);
    DensityState shifted = rho;
    for (const auto& l : rho.space().labels())
        if (!l.empty() && l.front() == mode_j.front()) shifted = fock::apply_phase(shifted, l, delta);
    return std::abs(fock::coincidence_expectation(shifted, mode_i, mode_j) - before);
}

std::vector<VerificationRow> verify_grid(const std::vector<double>& chis, const std::vector<double>& xis,
                                         const std::vector<double>& etas, fock::SpdcModel model) {
    std::vector<VerificationRow> rows;
    for (double chi : chis) {
        ChannelInput in;
        in.kind = InputKind::spdc;
        in.chi = chi;
        in.model = model;
        for (double e1 : etas)
            for (double e2 : etas) {
                const ChannelResult ref = run_event_channel(in, {1.0, e1, e2});
                for (double xi : xis) {
                    const ChannelResult r = run_event_channel(in, {xi, e1, e2});
                    VerificationRow row{};
                    row.chi = chi;
                    row.xi = xi;
                    row.eta1 = e1;
                    row.eta2 = e2;
                    row.coincidence = r.coincidence;
                    row.analytic = r.analytic.coincidence;
                    row.deviation = std::abs(r.coincidence - r.analytic.coincidence);
                    row.bound = 5.0 * chi * chi * chi * chi;
                    row.singles1 = r.singles1;
                    row.singles_drift = std::abs(r.singles1 - ref.singles1);
                    rows.push_back(row);
                }
            }
    }
    return rows;
}

}  // namespace qsim::channel
