#include "tdpp/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tdpp {

namespace {

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("density matrix dimension mismatch");
}

void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
}

double clamp_metric(double value, const char* what) {
    if (value < -1e-6 || value > 1.0 + 1e-6)
        throw std::runtime_error(std::string(what) + " escaped [0,1] beyond tolerance");
    return std::clamp(value, 0.0, 1.0);
}

DensityMatrix dephase_mixture(const DensityMatrix& rho, double survival) {
    const ComplexMatrix& z = UnitaryOp::pauli_z().matrix();
    ComplexMatrix flipped = z * rho.matrix() * z;
    return DensityMatrix(rho.matrix().scaled(survival) + flipped.scaled(1.0 - survival));
}

} // namespace

// --- PureState ---------------------------------------------------------------

PureState::PureState(int dim, std::vector<Complex> amplitudes)
    : dim_(dim), amps_(std::move(amplitudes)) {
    if (dim <= 0) throw std::invalid_argument("state dimension must be positive");
    if (amps_.size() != static_cast<size_t>(dim))
        throw std::invalid_argument("amplitude count does not match dimension");
    double norm_sq = 0.0;
    for (const Complex& a : amps_) norm_sq += std::norm(a);
    if (std::abs(std::sqrt(norm_sq) - 1.0) > kInvariantTol)
        throw std::invalid_argument("pure state is not normalized");
}

PureState make_state(double alpha, double beta) {
    const double norm = std::sqrt(alpha * alpha + beta * beta);
    if (norm == 0.0) throw std::invalid_argument("amplitudes must not both be zero");
    return PureState(2, {Complex(alpha / norm, 0.0), Complex(beta / norm, 0.0)});
}

// --- DensityMatrix -----------------------------------------------------------

DensityMatrix::DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {
    if (mat_.dim() <= 0) throw std::invalid_argument("empty density matrix");
    if (!mat_.is_hermitian(kInvariantTol))
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(mat_.trace().real() - 1.0) > kInvariantTol ||
        std::abs(mat_.trace().imag()) > kInvariantTol)
        throw std::invalid_argument("density matrix trace is not 1");
    const EigenSystem es = hermitian_eigensystem(mat_);
    if (es.eigenvalues.front() < -kInvariantTol)
        throw std::invalid_argument("density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    ComplexMatrix m(psi.dim());
    for (int r = 0; r < psi.dim(); ++r)
        for (int c = 0; c < psi.dim(); ++c) m.at(r, c) = psi.amp(r) * std::conj(psi.amp(c));
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    return DensityMatrix(ComplexMatrix::identity(dim).scaled(1.0 / dim));
}

DensityMatrix DensityMatrix::diagonal(const std::vector<double>& populations) {
    ComplexMatrix m(static_cast<int>(populations.size()));
    for (size_t i = 0; i < populations.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = populations[i];
    return DensityMatrix(std::move(m));
}

// --- UnitaryOp ---------------------------------------------------------------

UnitaryOp::UnitaryOp(ComplexMatrix m) : mat_(std::move(m)) {
    const ComplexMatrix product = mat_ * mat_.adjoint();
    if (product.max_abs_diff(ComplexMatrix::identity(mat_.dim())) > kInvariantTol)
        throw std::invalid_argument("operator is not unitary");
}

const UnitaryOp& UnitaryOp::pauli_z() {
    static const UnitaryOp z(ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0}));
    return z;
}

DensityMatrix UnitaryOp::conjugate(const DensityMatrix& rho) const {
    if (dim() != rho.dim()) throw std::invalid_argument("dimension mismatch");
    return DensityMatrix(mat_ * rho.matrix() * mat_.adjoint());
}

// --- QuantumChannel ----------------------------------------------------------

QuantumChannel QuantumChannel::depolarizing(double p) {
    require_probability(p, "depolarizing probability");
    return QuantumChannel(Kind::depolarizing, p);
}

QuantumChannel QuantumChannel::dephasing(double p) {
    require_probability(p, "dephasing probability");
    return QuantumChannel(Kind::dephasing, p);
}

QuantumChannel QuantumChannel::fiber(double length_km, double attenuation_db_per_km) {
    if (length_km < 0.0) throw std::invalid_argument("fiber length must be non-negative");
    if (attenuation_db_per_km < 0.0) throw std::invalid_argument("attenuation must be non-negative");
    const double survival = std::pow(10.0, -length_km * attenuation_db_per_km / 10.0);
    return QuantumChannel(Kind::fiber, survival);
}

QuantumChannel QuantumChannel::composed(std::vector<QuantumChannel> parts) {
    QuantumChannel c(Kind::composed, 0.0);
    c.parts_ = std::move(parts);
    return c;
}

DensityMatrix apply_channel(const QuantumChannel& channel, const DensityMatrix& rho) {
    switch (channel.kind()) {
        case QuantumChannel::Kind::depolarizing: {
            if (rho.dim() != 2) throw std::invalid_argument("depolarizing channel expects a qubit");
            const double p = channel.probability();
            return DensityMatrix(rho.matrix().scaled(1.0 - p) +
                                 ComplexMatrix::identity(2).scaled(p / 2.0));
        }
        case QuantumChannel::Kind::dephasing:
        case QuantumChannel::Kind::fiber: {
            if (rho.dim() != 2) throw std::invalid_argument("dephasing channel expects a qubit");
            return dephase_mixture(rho, channel.probability());
        }
        case QuantumChannel::Kind::composed: {
            DensityMatrix out = rho;
            // declared order reads like function composition, so the last
            // entry touches the state first
            for (auto it = channel.parts().rbegin(); it != channel.parts().rend(); ++it)
                out = apply_channel(*it, out);
            return out;
        }
    }
    throw std::logic_error("unreachable channel kind");
}

// --- metrics -------------------------------------------------------------------

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma);
    const EigenSystem es = hermitian_eigensystem(rho.matrix() - sigma.matrix());
    double sum = 0.0;
    for (double lambda : es.eigenvalues) sum += std::abs(lambda);
    return clamp_metric(0.5 * sum, "trace distance");
}

double fidelity_uhlmann(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma);
    const ComplexMatrix root = sqrt_psd(rho.matrix(), kInvariantTol);
    const ComplexMatrix inner = root * sigma.matrix() * root;
    const EigenSystem es = hermitian_eigensystem(inner);
    double sum = 0.0;
    for (double lambda : es.eigenvalues)
        if (lambda >= kSpectralNoiseFloor) sum += std::sqrt(lambda);
    return clamp_metric(sum, "fidelity");
}

double fidelity_product_form(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma);
    const ComplexMatrix product =
        sqrt_psd(rho.matrix(), kInvariantTol) * sqrt_psd(sigma.matrix(), kInvariantTol);
    return product.trace().real();
}

double helstrom_success_probability(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return 0.5 * (1.0 + trace_distance(rho, sigma));
}

double channel_state_fidelity(const DensityMatrix& rho, const QuantumChannel& channel) {
    return fidelity_uhlmann(rho, apply_channel(channel, rho));
}

double phase_damping_fidelity(const PureState& psi, double p) {
    require_probability(p, "phase damping probability");
    if (psi.dim() != 2) throw std::invalid_argument("phase damping expects a qubit state");
    // <psi|Z|psi> = |a0|^2 - |a1|^2
    const double z = std::norm(psi.amp(0)) - std::norm(psi.amp(1));
    return std::sqrt(p + (1.0 - p) * z * z);
}

ChannelMinimum min_channel_fidelity(const QuantumChannel& channel, int grid_resolution) {
    if (grid_resolution < 2) throw std::invalid_argument("grid resolution must be at least 2");
    const double pi = std::acos(-1.0);
    ChannelMinimum best{2.0, make_state(1.0, 0.0)};
    for (int i = 0; i < grid_resolution; ++i) {
        const double theta = pi * i / (grid_resolution - 1);
        for (int j = 0; j < grid_resolution; ++j) {
            const double phi = 2.0 * pi * j / grid_resolution;
            PureState psi(2, {Complex(std::cos(theta / 2.0), 0.0),
                              std::polar(std::sin(theta / 2.0), phi)});
            const double f = channel_state_fidelity(DensityMatrix::from_pure(psi), channel);
            if (f < best.fidelity) best = ChannelMinimum{f, psi};
        }
    }
    return best;
}

// --- purification ----------------------------------------------------------------

double pump_fidelity(double f_current, double f_base) {
    require_probability(f_current, "fidelity");
    require_probability(f_base, "fidelity");
    return 0.5 * (std::sqrt(f_current) + std::sqrt(f_base));
}

PumpResult pump_until_threshold(double f_initial_a, double f_initial_b, double threshold,
                                int max_rounds) {
    require_probability(f_initial_a, "fidelity");
    require_probability(f_initial_b, "fidelity");
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::invalid_argument("threshold must lie in (0,1]");
    if (max_rounds < 1) throw std::invalid_argument("max_rounds must be positive");

    PumpResult result;
    double current = f_initial_a;
    while (result.rounds < max_rounds) {
        current = pump_fidelity(current, f_initial_b);
        ++result.rounds;
        result.trajectory.push_back(current);
        if (current >= threshold) {
            result.converged = true;
            break;
        }
    }
    result.final_fidelity = current;
    return result;
}

// --- StateEnsemble ----------------------------------------------------------------

StateEnsemble::StateEnsemble(std::vector<Item> items) : items_(std::move(items)) {
    if (items_.empty()) throw std::invalid_argument("ensemble must not be empty");
    double sum_p = 0.0, sum_q = 0.0;
    const int dim = items_.front().rho.dim();
    for (const Item& it : items_) {
        require_probability(it.weight_source, "ensemble weight");
        require_probability(it.weight_dest, "ensemble weight");
        if (it.rho.dim() != dim || it.sigma.dim() != dim)
            throw std::invalid_argument("ensemble states must share one dimension");
        sum_p += it.weight_source;
        sum_q += it.weight_dest;
    }
    if (std::abs(sum_p - 1.0) > kInvariantTol || std::abs(sum_q - 1.0) > kInvariantTol)
        throw std::invalid_argument("ensemble weights must each sum to 1");
}

InequalityCheck ensemble_fidelity_inequality_check(const StateEnsemble& ensemble) {
    const int dim = ensemble.items().front().rho.dim();
    ComplexMatrix mix_rho(dim), mix_sigma(dim);
    double rhs = 0.0;
    for (const auto& it : ensemble.items()) {
        mix_rho = mix_rho + it.rho.matrix().scaled(it.weight_source);
        mix_sigma = mix_sigma + it.sigma.matrix().scaled(it.weight_dest);
        rhs += std::sqrt(it.weight_source * it.weight_dest) * fidelity_uhlmann(it.rho, it.sigma);
    }
    InequalityCheck out;
    out.lhs = fidelity_uhlmann(DensityMatrix(mix_rho), DensityMatrix(mix_sigma));
    out.rhs = rhs;
    out.holds = out.lhs >= out.rhs - kDerivedTol;
    return out;
}

} // namespace tdpp
