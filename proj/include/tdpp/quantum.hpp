#pragma once

#include "tdpp/complex_matrix.hpp"
#include "tdpp/tolerances.hpp"

#include <string>
#include <vector>

namespace tdpp {

/// Normalized state vector. Qubit states are the working case; dim 4 is
/// allowed for pair states.
class PureState {
public:
    PureState(int dim, std::vector<Complex> amplitudes);

    int dim() const { return dim_; }
    const std::vector<Complex>& amplitudes() const { return amps_; }
    const Complex& amp(int i) const { return amps_[static_cast<size_t>(i)]; }

private:
    int dim_;
    std::vector<Complex> amps_;
};

/// Hermitian, positive semidefinite, unit-trace matrix. Construction
/// validates all three invariants and throws on violation.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m);

    static DensityMatrix from_pure(const PureState& psi);
    static DensityMatrix maximally_mixed(int dim);
    static DensityMatrix diagonal(const std::vector<double>& populations);

    int dim() const { return mat_.dim(); }
    const ComplexMatrix& matrix() const { return mat_; }

private:
    ComplexMatrix mat_;
};

class UnitaryOp {
public:
    explicit UnitaryOp(ComplexMatrix m);

    static const UnitaryOp& pauli_z();

    int dim() const { return mat_.dim(); }
    const ComplexMatrix& matrix() const { return mat_; }

    DensityMatrix conjugate(const DensityMatrix& rho) const;  // U rho U^dagger

private:
    ComplexMatrix mat_;
};

/// Completely positive trace-preserving qubit map. The two probabilistic
/// channels follow the mixture conventions the worked fidelity values pin
/// down:
///   depolarizing(p):  rho -> (1-p) rho + p I/2
///   dephasing(p):     rho -> p rho + (1-p) Z rho Z   (p = survival weight)
///   fiber(L, a):      dephasing with survival 10^(-L*a/10), i.e. the Z-flip
///                     probability is 1 - 10^(-L*a/10)
/// composed(list) applies the declared channels right to left.
class QuantumChannel {
public:
    enum class Kind { depolarizing, dephasing, fiber, composed };

    static QuantumChannel depolarizing(double p);
    static QuantumChannel dephasing(double p);
    static QuantumChannel fiber(double length_km, double attenuation_db_per_km);
    static QuantumChannel composed(std::vector<QuantumChannel> parts);

    Kind kind() const { return kind_; }
    double probability() const { return p_; }
    const std::vector<QuantumChannel>& parts() const { return parts_; }

private:
    QuantumChannel(Kind k, double p) : kind_(k), p_(p) {}
    Kind kind_;
    double p_ = 0.0;
    std::vector<QuantumChannel> parts_;
};

/// Weighted pairs (p_i, q_i, rho_i, sigma_i); both weight columns sum to 1.
class StateEnsemble {
public:
    struct Item {
        double weight_source;
        double weight_dest;
        DensityMatrix rho;
        DensityMatrix sigma;
    };

    explicit StateEnsemble(std::vector<Item> items);
    const std::vector<Item>& items() const { return items_; }

private:
    std::vector<Item> items_;
};

struct PumpResult {
    double final_fidelity = 0.0;
    int rounds = 0;
    std::vector<double> trajectory;
    bool converged = false;
};

struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

struct ChannelMinimum {
    double fidelity = 1.0;
    PureState state;
};

// --- state distinguishability -------------------------------------------

/// (1/2) sum |eigenvalues| of (rho - sigma); clamped into [0,1].
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// tr sqrt( sqrt(rho) sigma sqrt(rho) ), the canonical fidelity.
double fidelity_uhlmann(const DensityMatrix& rho, const DensityMatrix& sigma);

/// tr( sqrt(rho) sqrt(sigma) ); agrees with fidelity_uhlmann when the
/// inputs commute.
double fidelity_product_form(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Optimal two-state discrimination probability (1 + D)/2.
double helstrom_success_probability(const DensityMatrix& rho, const DensityMatrix& sigma);

// --- channels -------------------------------------------------------------

DensityMatrix apply_channel(const QuantumChannel& channel, const DensityMatrix& rho);

/// fidelity_uhlmann(rho, channel(rho)).
double channel_state_fidelity(const DensityMatrix& rho, const QuantumChannel& channel);

/// Closed-form fidelity of a pure qubit state through the phase-damping
/// channel: sqrt(p + (1-p) <psi|Z|psi>^2).
double phase_damping_fidelity(const PureState& psi, double p);

/// Minimum of channel_state_fidelity over a deterministic Bloch-sphere grid
/// with grid_resolution^2 sample states.
ChannelMinimum min_channel_fidelity(const QuantumChannel& channel, int grid_resolution);

// --- purification ----------------------------------------------------------

/// One entanglement-pumping round: (sqrt(f_current) + sqrt(f_base)) / 2.
double pump_fidelity(double f_current, double f_base);

/// Iterated pumping against the base pair until threshold or max_rounds.
PumpResult pump_until_threshold(double f_initial_a, double f_initial_b, double threshold,
                                int max_rounds);

/// Joint-concavity inequality: F(sum p_i rho_i, sum q_i sigma_i) against
/// sum sqrt(p_i q_i) F(rho_i, sigma_i).
InequalityCheck ensemble_fidelity_inequality_check(const StateEnsemble& ensemble);

// --- state construction -----------------------------------------------------

/// Normalized qubit state (alpha, beta) / sqrt(alpha^2 + beta^2).
PureState make_state(double alpha, double beta);

} // namespace tdpp
