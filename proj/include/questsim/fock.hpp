#pragma once

// Dense bosonic states on a truncated multi-mode Fock space.
//
// Amplitudes are indexed row-major over per-mode occupation numbers: the first
// mode label is the slowest-varying digit, each digit runs 0..cutoff.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qsim::fock {

using Complex = std::complex<double>;

class FockSpace {
public:
    FockSpace(std::vector<std::string> labels, int cutoff);

    int cutoff() const noexcept { return cutoff_; }
    std::size_t mode_count() const noexcept { return labels_.size(); }
    std::size_t dimension() const noexcept { return dimension_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Position of a label in the mode list; throws InvalidArgument if absent.
    std::size_t mode_index(std::string_view label) const;
    bool has_mode(std::string_view label) const noexcept;

    std::size_t stride(std::size_t mode) const noexcept { return strides_[mode]; }
    int occupation_of(std::size_t index, std::size_t mode) const noexcept {
        return static_cast<int>((index / strides_[mode]) % static_cast<std::size_t>(cutoff_ + 1));
    }
    std::vector<int> occupation(std::size_t index) const;
    std::size_t index(std::span<const int> occupation) const;

    bool operator==(const FockSpace& other) const noexcept {
        return cutoff_ == other.cutoff_ && labels_ == other.labels_;
    }

private:
    std::vector<std::string> labels_;
    int cutoff_;
    std::size_t dimension_;
    std::vector<std::size_t> strides_;
};

/// Pure state. Norm may drop below one only through tracked truncation loss.
class TruncatedFockState {
public:
    TruncatedFockState(FockSpace space, Eigen::VectorXcd amplitudes, double leakage = 0.0);

    static TruncatedFockState vacuum(std::vector<std::string> labels, int cutoff);

    const FockSpace& space() const noexcept { return space_; }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
    Complex amplitude(std::span<const int> occupation) const;
    Complex amplitude(std::initializer_list<int> occupation) const;

    double norm_squared() const { return amplitudes_.squaredNorm(); }
    /// Probability mass pushed past the cutoff by operations on this state.
    double leakage() const noexcept { return leakage_; }
    /// Factor applied when the state was normalized at preparation (1 if none).
    double normalization() const noexcept { return normalization_; }
    void set_normalization(double f) noexcept { normalization_ = f; }

private:
    FockSpace space_;
    Eigen::VectorXcd amplitudes_;
    double leakage_;
    double normalization_ = 1.0;
};

class DensityState {
public:
    DensityState(FockSpace space, Eigen::MatrixXcd matrix, double leakage = 0.0);

    static DensityState from_pure(const TruncatedFockState& psi);

    const FockSpace& space() const noexcept { return space_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
    double trace() const { return matrix_.trace().real(); }
    double leakage() const noexcept { return leakage_; }

    double hermiticity_defect() const;
    double min_eigenvalue() const;

private:
    FockSpace space_;
    Eigen::MatrixXcd matrix_;
    double leakage_;
};

enum class SpdcModel {
    first_order,        ///< |00> + chi|11>, normalized
    two_mode_squeezed,  ///< sqrt(1-|chi|^2) sum_n chi^n |nn>, tail beyond cutoff kept as leakage
};

/// Default upper bound on |chi| for which first-order pair statistics are trusted.
inline constexpr double kChiGuard = 0.3;

TruncatedFockState spdc_state(Complex chi, int cutoff, SpdcModel model = SpdcModel::first_order,
                              double chi_guard = kChiGuard);
TruncatedFockState coherent_pair_state(Complex alpha, Complex beta, int cutoff);
/// |0> + chi/sqrt2 (|HH> + |VV>) over modes 1H,1V,2H,2V.
TruncatedFockState polarization_spdc_state(Complex chi, int cutoff, double chi_guard = kChiGuard);

/// Single-mode coherent amplitudes truncated at cutoff (not renormalized).
Eigen::VectorXcd coherent_amplitudes(Complex alpha, int cutoff);

/// Tensor copy into ancilla modes: a leading '1' in a label becomes '3', '2' becomes '4'.
TruncatedFockState duplicate_state(const TruncatedFockState& s);

TruncatedFockState tensor_product(const TruncatedFockState& a, const TruncatedFockState& b);

/// Guard used by apply_displacement: |gamma|^2 + 3|gamma| + 3 <= cutoff.
bool displacement_within_guard(Complex gamma, int cutoff) noexcept;
int displacement_cutoff(Complex amplitude) noexcept;

TruncatedFockState apply_displacement(const TruncatedFockState& s, std::string_view mode, Complex gamma);

/// Heisenberg action U a+ U^dag = sqrt(xi) a+ - sqrt(1-xi) b+,
///                   U b+ U^dag = sqrt(xi) b+ + sqrt(1-xi) a+.
TruncatedFockState apply_event_beamsplitter(const TruncatedFockState& s, std::string_view mode_a,
                                            std::string_view mode_b, double xi);

TruncatedFockState apply_phase(const TruncatedFockState& s, std::string_view mode, double delta);
DensityState apply_phase(const DensityState& rho, std::string_view mode, double delta);

/// Pure-loss channel realized with a vacuum ancilla and a beamsplitter of
/// transmission eta; the ancilla is traced out.
DensityState apply_loss(const TruncatedFockState& s, std::string_view mode, double eta);
/// Same channel applied through its Kraus decomposition.
DensityState apply_loss(const DensityState& rho, std::string_view mode, double eta);

DensityState partial_trace(const DensityState& rho, const std::vector<std::string>& keep);
DensityState partial_trace(const TruncatedFockState& psi, const std::vector<std::string>& keep);

double coincidence_expectation(const DensityState& rho, std::string_view mode_i, std::string_view mode_j);
double singles_expectation(const DensityState& rho, std::string_view mode_i);
double mean_photon_number(const TruncatedFockState& s, std::string_view mode);
double mean_photon_number(const DensityState& rho, std::string_view mode);
double total_photon_number(const TruncatedFockState& s);

double fidelity(const DensityState& rho, const TruncatedFockState& psi);
double fidelity(const TruncatedFockState& a, const TruncatedFockState& b);

}  // namespace qsim::fock
