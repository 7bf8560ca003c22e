#include "questsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

#include "questsim/errors.hpp"

namespace qsim::fock {

namespace {

Eigen::MatrixXcd annihilation(int dim) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Applies a single-mode operator to every slice of a vector over the space.
void apply_single_mode(const FockSpace& space, std::size_t mode, const Eigen::MatrixXcd& op,
                       Eigen::Ref<Eigen::VectorXcd> v) {
    const std::size_t d = static_cast<std::size_t>(space.cutoff() + 1);
    const std::size_t stride = space.stride(mode);
    Eigen::VectorXcd slice(d);
    for (std::size_t base = 0; base < space.dimension(); ++base) {
        if (space.occupation_of(base, mode) != 0) continue;
        for (std::size_t k = 0; k < d; ++k) slice[k] = v[base + k * stride];
        Eigen::VectorXcd out = op * slice;
        for (std::size_t k = 0; k < d; ++k) v[base + k * stride] = out[k];
    }
}

// Two-mode operator indexed as (n_a * d + n_b).
void apply_two_mode(const FockSpace& space, std::size_t ma, std::size_t mb, const Eigen::MatrixXcd& op,
                    Eigen::Ref<Eigen::VectorXcd> v) {
    const std::size_t d = static_cast<std::size_t>(space.cutoff() + 1);
    const std::size_t sa = space.stride(ma);
    const std::size_t sb = space.stride(mb);
    Eigen::VectorXcd slice(d * d);
    for (std::size_t base = 0; base < space.dimension(); ++base) {
        if (space.occupation_of(base, ma) != 0 || space.occupation_of(base, mb) != 0) continue;
        for (std::size_t ka = 0; ka < d; ++ka)
            for (std::size_t kb = 0; kb < d; ++kb) slice[ka * d + kb] = v[base + ka * sa + kb * sb];
        Eigen::VectorXcd out = op * slice;
        for (std::size_t ka = 0; ka < d; ++ka)
            for (std::size_t kb = 0; kb < d; ++kb) v[base + ka * sa + kb * sb] = out[ka * d + kb];
    }
}

// rho -> K rho K^dag for an operator K acting on one mode.
Eigen::MatrixXcd conjugate_single_mode(const FockSpace& space, std::size_t mode, const Eigen::MatrixXcd& k,
                                       const Eigen::MatrixXcd& rho) {
    Eigen::MatrixXcd left = rho;
    for (Eigen::Index j = 0; j < left.cols(); ++j) apply_single_mode(space, mode, k, left.col(j));
    Eigen::MatrixXcd adj = left.adjoint();
    for (Eigen::Index j = 0; j < adj.cols(); ++j) apply_single_mode(space, mode, k, adj.col(j));
    return adj.adjoint();
}

std::string copy_label(const std::string& label) {
    if (label.empty()) throw InvalidArgument("cannot duplicate an unnamed mode");
    std::string out = label;
    switch (label.front()) {
        case '1': out.front() = '3'; break;
        case '2': out.front() = '4'; break;
        default: throw InvalidArgument("duplicate_state expects modes labelled 1* and 2*, got '" + label + "'");
    }
    return out;
}

void check_unit_interval(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

// ---------------------------------------------------------------------------

FockSpace::FockSpace(std::vector<std::string> labels, int cutoff) : labels_(std::move(labels)), cutoff_(cutoff) {
    if (cutoff_ < 0) throw InvalidArgument("cutoff must be non-negative");
    if (labels_.empty()) throw InvalidArgument("a Fock space needs at least one mode");
    for (std::size_t i = 0; i < labels_.size(); ++i)
        for (std::size_t j = i + 1; j < labels_.size(); ++j)
            if (labels_[i] == labels_[j]) throw InvalidArgument("duplicate mode label '" + labels_[i] + "'");
    strides_.assign(labels_.size(), 1);
    const std::size_t d = static_cast<std::size_t>(cutoff_ + 1);
    for (std::size_t m = labels_.size(); m-- > 1;) strides_[m - 1] = strides_[m] * d;
    dimension_ = strides_.front() * d;
}

std::size_t FockSpace::mode_index(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw InvalidArgument("unknown mode '" + std::string(label) + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

bool FockSpace::has_mode(std::string_view label) const noexcept {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::vector<int> FockSpace::occupation(std::size_t index) const {
    std::vector<int> occ(labels_.size());
    for (std::size_t m = 0; m < labels_.size(); ++m) occ[m] = occupation_of(index, m);
    return occ;
}

std::size_t FockSpace::index(std::span<const int> occupation) const {
    if (occupation.size() != labels_.size()) throw InvalidArgument("occupation has wrong number of modes");
    std::size_t idx = 0;
    for (std::size_t m = 0; m < labels_.size(); ++m) {
        if (occupation[m] < 0 || occupation[m] > cutoff_) throw InvalidArgument("occupation exceeds cutoff");
        idx += static_cast<std::size_t>(occupation[m]) * strides_[m];
    }
    return idx;
}

// ---------------------------------------------------------------------------

TruncatedFockState::TruncatedFockState(FockSpace space, Eigen::VectorXcd amplitudes, double leakage)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)), leakage_(leakage) {
    if (static_cast<std::size_t>(amplitudes_.size()) != space_.dimension())
        throw InvalidArgument("amplitude vector does not match the Fock space dimension");
    const double n2 = amplitudes_.squaredNorm();
    if (!(n2 > 0.0) || n2 > 1.0 + 1e-9) throw InvalidArgument("state norm^2 must lie in (0, 1]");
}

TruncatedFockState TruncatedFockState::vacuum(std::vector<std::string> labels, int cutoff) {
    FockSpace space(std::move(labels), cutoff);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dimension()));
    v[0] = 1.0;
    return TruncatedFockState(std::move(space), std::move(v));
}

Complex TruncatedFockState::amplitude(std::span<const int> occupation) const {
    return amplitudes_[static_cast<Eigen::Index>(space_.index(occupation))];
}

Complex TruncatedFockState::amplitude(std::initializer_list<int> occupation) const {
    return amplitude(std::span<const int>(occupation.begin(), occupation.size()));
}

DensityState::DensityState(FockSpace space, Eigen::MatrixXcd matrix, double leakage)
    : space_(std::move(space)), matrix_(std::move(matrix)), leakage_(leakage) {
    const auto d = static_cast<Eigen::Index>(space_.dimension());
    if (matrix_.rows() != d || matrix_.cols() != d)
        throw InvalidArgument("density matrix does not match the Fock space dimension");
}

DensityState DensityState::from_pure(const TruncatedFockState& psi) {
    const auto& v = psi.amplitudes();
    return DensityState(psi.space(), v * v.adjoint(), psi.leakage());
}

double DensityState::hermiticity_defect() const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityState::min_eigenvalue() const {
    Eigen::MatrixXcd h = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------

Eigen::VectorXcd coherent_amplitudes(Complex alpha, int cutoff) {
    Eigen::VectorXcd v(cutoff + 1);
    Complex term = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n <= cutoff; ++n) {
        v[n] = term;
        term *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return v;
}

TruncatedFockState spdc_state(Complex chi, int cutoff, SpdcModel model, double chi_guard) {
    if (cutoff < 2) throw InvalidArgument("spdc_state needs cutoff >= 2");
    if (std::abs(chi) > chi_guard) throw InvalidArgument("|chi| exceeds the weak-pumping guard");
    FockSpace space({"1", "2"}, cutoff);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dimension()));
    const std::size_t d = static_cast<std::size_t>(cutoff + 1);
    if (model == SpdcModel::first_order) {
        const double norm = 1.0 / std::sqrt(1.0 + std::norm(chi));
        v[0] = norm;
        v[static_cast<Eigen::Index>(d + 1)] = chi * norm;
        TruncatedFockState s(std::move(space), std::move(v));
        s.set_normalization(norm);
        return s;
    }
    // Amplitudes of the exact state sqrt(1-|chi|^2) sum chi^n |nn>; the tail
    // beyond the cutoff is reported as leakage rather than renormalized away.
    const double norm = std::sqrt(1.0 - std::norm(chi));
    Complex c = norm;
    for (std::size_t n = 0; n < d; ++n) {
        v[static_cast<Eigen::Index>(n * d + n)] = c;
        c *= chi;
    }
    const double tail = std::pow(std::norm(chi), static_cast<double>(cutoff + 1));
    TruncatedFockState s(std::move(space), std::move(v), tail);
    s.set_normalization(norm);
    return s;
}

TruncatedFockState coherent_pair_state(Complex alpha, Complex beta, int cutoff) {
    FockSpace space({"1", "2"}, cutoff);
    const Eigen::VectorXcd a = coherent_amplitudes(alpha, cutoff);
    const Eigen::VectorXcd b = coherent_amplitudes(beta, cutoff);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(space.dimension()));
    for (int i = 0; i <= cutoff; ++i)
        for (int j = 0; j <= cutoff; ++j) v[i * (cutoff + 1) + j] = a[i] * b[j];
    const double leak = 1.0 - v.squaredNorm();
    return TruncatedFockState(std::move(space), std::move(v), leak);
}

TruncatedFockState polarization_spdc_state(Complex chi, int cutoff, double chi_guard) {
    if (cutoff < 2) throw InvalidArgument("polarization_spdc_state needs cutoff >= 2");
    if (std::abs(chi) > chi_guard) throw InvalidArgument("|chi| exceeds the weak-pumping guard");
    FockSpace space({"1H", "1V", "2H", "2V"}, cutoff);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dimension()));
    const double norm = 1.0 / std::sqrt(1.0 + std::norm(chi));
    const int hh[] = {1, 0, 1, 0};
    const int vv[] = {0, 1, 0, 1};
    v[0] = norm;
    v[static_cast<Eigen::Index>(space.index(hh))] = chi * norm / std::sqrt(2.0);
    v[static_cast<Eigen::Index>(space.index(vv))] = chi * norm / std::sqrt(2.0);
    TruncatedFockState s(std::move(space), std::move(v));
    s.set_normalization(norm);
    return s;
}

TruncatedFockState tensor_product(const TruncatedFockState& a, const TruncatedFockState& b) {
    if (a.space().cutoff() != b.space().cutoff()) throw InvalidArgument("tensor factors must share a cutoff");
    std::vector<std::string> labels = a.space().labels();
    labels.insert(labels.end(), b.space().labels().begin(), b.space().labels().end());
    FockSpace space(std::move(labels), a.space().cutoff());
    const auto& va = a.amplitudes();
    const auto& vb = b.amplitudes();
    Eigen::VectorXcd v(static_cast<Eigen::Index>(space.dimension()));
    for (Eigen::Index i = 0; i < va.size(); ++i) v.segment(i * vb.size(), vb.size()) = va[i] * vb;
    const double leak = 1.0 - (1.0 - a.leakage()) * (1.0 - b.leakage());
    TruncatedFockState out(std::move(space), std::move(v), leak);
    out.set_normalization(a.normalization() * b.normalization());
    return out;
}

TruncatedFockState duplicate_state(const TruncatedFockState& s) {
    std::vector<std::string> copy_labels;
    for (const auto& l : s.space().labels()) copy_labels.push_back(copy_label(l));
    TruncatedFockState copy(FockSpace(copy_labels, s.space().cutoff()), s.amplitudes(), s.leakage());
    copy.set_normalization(s.normalization());
    return tensor_product(s, copy);
}

// ---------------------------------------------------------------------------

bool displacement_within_guard(Complex gamma, int cutoff) noexcept {
    const double g = std::abs(gamma);
    return g * g + 3.0 * g + 3.0 <= static_cast<double>(cutoff);
}

int displacement_cutoff(Complex amplitude) noexcept {
    const double g = std::abs(amplitude);
    return std::max(2, static_cast<int>(std::ceil(g * g + 3.0 * g + 3.0)));
}

TruncatedFockState apply_displacement(const TruncatedFockState& s, std::string_view mode, Complex gamma) {
    const std::size_t m = s.space().mode_index(mode);
    if (gamma == Complex(0.0, 0.0)) return s;
    const int cutoff = s.space().cutoff();
    if (!displacement_within_guard(gamma, cutoff))
        throw TruncationRisk("displacement |gamma| = " + std::to_string(std::abs(gamma)) +
                             " is too large for cutoff " + std::to_string(cutoff));
    // Exponentiate in a padded space and keep the physical block, so population
    // that would leave the truncated space shows up as a norm deficit.
    const int padded = 2 * cutoff + 24;
    const Eigen::MatrixXcd a = annihilation(padded);
    const Eigen::MatrixXcd gen = gamma * a.adjoint() - std::conj(gamma) * a;
    const Eigen::MatrixXcd d_full = gen.exp();
    const Eigen::MatrixXcd d = d_full.topLeftCorner(cutoff + 1, cutoff + 1);

    Eigen::VectorXcd v = s.amplitudes();
    const double before = v.squaredNorm();
    apply_single_mode(s.space(), m, d, v);
    const double lost = std::max(0.0, before - v.squaredNorm());
    TruncatedFockState out(s.space(), std::move(v), s.leakage() + lost);
    out.set_normalization(s.normalization());
    return out;
}

TruncatedFockState apply_event_beamsplitter(const TruncatedFockState& s, std::string_view mode_a,
                                            std::string_view mode_b, double xi) {
    check_unit_interval(xi, "xi");
    const std::size_t ma = s.space().mode_index(mode_a);
    const std::size_t mb = s.space().mode_index(mode_b);
    if (ma == mb) throw InvalidArgument("beamsplitter modes must be distinct");
    if (xi == 1.0) return s;

    // U = exp(phi (a+ b - a b+)) with cos(phi) = sqrt(xi) maps
    // a+ -> cos(phi) a+ - sin(phi) b+ and b+ -> cos(phi) b+ + sin(phi) a+.
    const int d = s.space().cutoff() + 1;
    const Eigen::MatrixXcd a = annihilation(d);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    const Eigen::MatrixXcd ad_b = kron(a.adjoint(), id) * kron(id, a);
    const Eigen::MatrixXcd gen = ad_b - ad_b.adjoint();
    const double phi = std::acos(std::sqrt(xi));
    const Eigen::MatrixXcd u = (phi * gen).exp();

    Eigen::VectorXcd v = s.amplitudes();
    apply_two_mode(s.space(), ma, mb, u, v);
    TruncatedFockState out(s.space(), std::move(v), s.leakage());
    out.set_normalization(s.normalization());
    return out;
}

TruncatedFockState apply_phase(const TruncatedFockState& s, std::string_view mode, double delta) {
    const std::size_t m = s.space().mode_index(mode);
    Eigen::VectorXcd v = s.amplitudes();
    for (std::size_t i = 0; i < s.space().dimension(); ++i)
        v[static_cast<Eigen::Index>(i)] *= std::polar(1.0, -delta * s.space().occupation_of(i, m));
    TruncatedFockState out(s.space(), std::move(v), s.leakage());
    out.set_normalization(s.normalization());
    return out;
}

DensityState apply_phase(const DensityState& rho, std::string_view mode, double delta) {
    const auto& space = rho.space();
    const std::size_t m = space.mode_index(mode);
    Eigen::MatrixXcd out = rho.matrix();
    for (std::size_t i = 0; i < space.dimension(); ++i)
        for (std::size_t j = 0; j < space.dimension(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *=
                std::polar(1.0, -delta * (space.occupation_of(i, m) - space.occupation_of(j, m)));
    return DensityState(space, std::move(out), rho.leakage());
}

DensityState apply_loss(const TruncatedFockState& s, std::string_view mode, double eta) {
    check_unit_interval(eta, "eta");
    s.space().mode_index(mode);
    const std::string ancilla = "~loss:" + std::string(mode);
    const TruncatedFockState env = TruncatedFockState::vacuum({ancilla}, s.space().cutoff());
    const TruncatedFockState joint = apply_event_beamsplitter(tensor_product(s, env), mode, ancilla, eta);
    return partial_trace(joint, s.space().labels());
}

DensityState apply_loss(const DensityState& rho, std::string_view mode, double eta) {
    check_unit_interval(eta, "eta");
    const auto& space = rho.space();
    const std::size_t m = space.mode_index(mode);
    const int d = space.cutoff() + 1;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.matrix().rows(), rho.matrix().cols());
    for (int k = 0; k < d; ++k) {
        // K_k |n> = sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k>
        Eigen::MatrixXcd kraus = Eigen::MatrixXcd::Zero(d, d);
        bool any = false;
        for (int n = k; n < d; ++n) {
            const double binom = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
            const double w = binom * std::pow(eta, n - k) * std::pow(1.0 - eta, k);
            if (w > 0.0) {
                kraus(n - k, n) = std::sqrt(w);
                any = true;
            }
        }
        if (any) out += conjugate_single_mode(space, m, kraus, rho.matrix());
    }
    return DensityState(space, std::move(out), rho.leakage());
}

// ---------------------------------------------------------------------------

namespace {

struct TraceMap {
    FockSpace kept;
    std::vector<std::size_t> keep_index;  // full index -> kept index
    std::vector<std::size_t> env_index;   // full index -> environment index
    std::size_t env_dimension;
};

TraceMap build_trace_map(const FockSpace& space, const std::vector<std::string>& keep) {
    if (keep.empty()) throw InvalidArgument("partial_trace needs at least one mode to keep");
    std::vector<std::size_t> keep_modes;
    for (const auto& l : keep) keep_modes.push_back(space.mode_index(l));
    std::vector<std::size_t> env_modes;
    for (std::size_t m = 0; m < space.mode_count(); ++m)
        if (std::find(keep_modes.begin(), keep_modes.end(), m) == keep_modes.end()) env_modes.push_back(m);

    FockSpace kept(keep, space.cutoff());
    const std::size_t d = static_cast<std::size_t>(space.cutoff() + 1);
    TraceMap map{kept, std::vector<std::size_t>(space.dimension()), std::vector<std::size_t>(space.dimension()), 1};
    for (std::size_t i = 0; i < env_modes.size(); ++i) map.env_dimension *= d;
    for (std::size_t idx = 0; idx < space.dimension(); ++idx) {
        std::size_t k = 0;
        for (std::size_t m : keep_modes) k = k * d + static_cast<std::size_t>(space.occupation_of(idx, m));
        std::size_t e = 0;
        for (std::size_t m : env_modes) e = e * d + static_cast<std::size_t>(space.occupation_of(idx, m));
        map.keep_index[idx] = k;
        map.env_index[idx] = e;
    }
    return map;
}

}  // namespace

DensityState partial_trace(const TruncatedFockState& psi, const std::vector<std::string>& keep) {
    const TraceMap map = build_trace_map(psi.space(), keep);
    const auto dk = static_cast<Eigen::Index>(map.kept.dimension());
    const auto de = static_cast<Eigen::Index>(map.env_dimension);
    Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Zero(dk, de);
    for (std::size_t idx = 0; idx < psi.space().dimension(); ++idx)
        coeffs(static_cast<Eigen::Index>(map.keep_index[idx]), static_cast<Eigen::Index>(map.env_index[idx])) =
            psi.amplitudes()[static_cast<Eigen::Index>(idx)];
    Eigen::MatrixXcd rho = coeffs * coeffs.adjoint();
    return DensityState(map.kept, std::move(rho), psi.leakage());
}

DensityState partial_trace(const DensityState& rho, const std::vector<std::string>& keep) {
    const TraceMap map = build_trace_map(rho.space(), keep);
    std::vector<std::vector<std::size_t>> by_env(map.env_dimension);
    for (std::size_t idx = 0; idx < rho.space().dimension(); ++idx) by_env[map.env_index[idx]].push_back(idx);
    const auto dk = static_cast<Eigen::Index>(map.kept.dimension());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
    for (const auto& group : by_env)
        for (std::size_t i : group)
            for (std::size_t j : group)
                out(static_cast<Eigen::Index>(map.keep_index[i]), static_cast<Eigen::Index>(map.keep_index[j])) +=
                    rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return DensityState(map.kept, std::move(out), rho.leakage());
}

// ---------------------------------------------------------------------------

double coincidence_expectation(const DensityState& rho, std::string_view mode_i, std::string_view mode_j) {
    const auto& space = rho.space();
    const std::size_t i = space.mode_index(mode_i);
    const std::size_t j = space.mode_index(mode_j);
    if (i == j) throw InvalidArgument("coincidence modes must be distinct");
    double p = 0.0;
    for (std::size_t idx = 0; idx < space.dimension(); ++idx)
        if (space.occupation_of(idx, i) >= 1 && space.occupation_of(idx, j) >= 1)
            p += rho.matrix()(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)).real();
    return p;
}

double singles_expectation(const DensityState& rho, std::string_view mode_i) {
    const auto& space = rho.space();
    const std::size_t i = space.mode_index(mode_i);
    double p = 0.0;
    for (std::size_t idx = 0; idx < space.dimension(); ++idx)
        if (space.occupation_of(idx, i) >= 1)
            p += rho.matrix()(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)).real();
    return p;
}

double mean_photon_number(const TruncatedFockState& s, std::string_view mode) {
    const std::size_t m = s.space().mode_index(mode);
    double n = 0.0;
    for (std::size_t idx = 0; idx < s.space().dimension(); ++idx)
        n += s.space().occupation_of(idx, m) * std::norm(s.amplitudes()[static_cast<Eigen::Index>(idx)]);
    return n;
}

double mean_photon_number(const DensityState& rho, std::string_view mode) {
    const std::size_t m = rho.space().mode_index(mode);
    double n = 0.0;
    for (std::size_t idx = 0; idx < rho.space().dimension(); ++idx)
        n += rho.space().occupation_of(idx, m) *
             rho.matrix()(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)).real();
    return n;
}

double total_photon_number(const TruncatedFockState& s) {
    double n = 0.0;
    for (std::size_t idx = 0; idx < s.space().dimension(); ++idx) {
        int occ = 0;
        for (std::size_t m = 0; m < s.space().mode_count(); ++m) occ += s.space().occupation_of(idx, m);
        n += occ * std::norm(s.amplitudes()[static_cast<Eigen::Index>(idx)]);
    }
    return n;
}

double fidelity(const DensityState& rho, const TruncatedFockState& psi) {
    if (!(rho.space() == psi.space())) throw InvalidArgument("fidelity operands live on different spaces");
    const auto& v = psi.amplitudes();
    return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

double fidelity(const TruncatedFockState& a, const TruncatedFockState& b) {
    if (!(a.space() == b.space())) throw InvalidArgument("fidelity operands live on different spaces");
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace qsim::fock
