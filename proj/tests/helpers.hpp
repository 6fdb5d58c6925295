#pragma once

#include "tdpp/quantum.hpp"
#include "tdpp/rng.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace tdpp::test {

// Random full-rank qubit density matrix via G G^dagger / tr.
inline DensityMatrix random_density(Rng& rng, int dim = 2) {
    ComplexMatrix g(dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) g.at(r, c) = Complex(rng.normal(0, 1), rng.normal(0, 1));
    ComplexMatrix w = g * g.adjoint();
    return DensityMatrix(w.scaled(1.0 / w.trace().real()));
}

inline PureState random_pure(Rng& rng, int dim = 2) {
    std::vector<Complex> amps(static_cast<size_t>(dim));
    double norm_sq = 0.0;
    for (auto& a : amps) {
        a = Complex(rng.normal(0, 1), rng.normal(0, 1));
        norm_sq += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& a : amps) a *= inv;
    return PureState(dim, std::move(amps));
}

// Random unitary by Gram-Schmidt on a random complex matrix.
inline UnitaryOp random_unitary(Rng& rng, int dim = 2) {
    std::vector<std::vector<Complex>> cols(static_cast<size_t>(dim),
                                           std::vector<Complex>(static_cast<size_t>(dim)));
    for (auto& col : cols)
        for (auto& x : col) x = Complex(rng.normal(0, 1), rng.normal(0, 1));
    for (size_t k = 0; k < cols.size(); ++k) {
        for (size_t j = 0; j < k; ++j) {
            Complex proj = 0.0;
            for (size_t r = 0; r < cols[k].size(); ++r) proj += std::conj(cols[j][r]) * cols[k][r];
            for (size_t r = 0; r < cols[k].size(); ++r) cols[k][r] -= proj * cols[j][r];
        }
        double norm_sq = 0.0;
        for (const auto& x : cols[k]) norm_sq += std::norm(x);
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& x : cols[k]) x *= inv;
    }
    ComplexMatrix u(dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) u.at(r, c) = cols[static_cast<size_t>(c)][static_cast<size_t>(r)];
    return UnitaryOp(std::move(u));
}

// Closed-form eigensystem of a 2x2 Hermitian matrix; written separately from
// the production Jacobi path so oracle checks do not share code with it.
struct Analytic2x2 {
    double lo = 0.0, hi = 0.0;
    std::vector<Complex> vec_lo, vec_hi;
};

inline Analytic2x2 analytic_eigensystem_2x2(const ComplexMatrix& h) {
    const double a = h.at(0, 0).real();
    const double c = h.at(1, 1).real();
    const Complex b = h.at(0, 1);
    const double mean = 0.5 * (a + c);
    const double rad = std::sqrt(0.25 * (a - c) * (a - c) + std::norm(b));
    Analytic2x2 out;
    out.lo = mean - rad;
    out.hi = mean + rad;
    auto eigvec = [&](double lambda) {
        std::vector<Complex> v(2);
        if (std::abs(b) > 1e-300) {
            v[0] = b;
            v[1] = Complex(lambda - a, 0.0);
        } else {
            v[0] = (std::abs(lambda - a) <= std::abs(lambda - c)) ? 1.0 : 0.0;
            v[1] = (v[0] == Complex(1.0)) ? 0.0 : 1.0;
        }
        const double inv = 1.0 / std::sqrt(std::norm(v[0]) + std::norm(v[1]));
        v[0] *= inv;
        v[1] *= inv;
        return v;
    };
    out.vec_lo = eigvec(out.lo);
    out.vec_hi = eigvec(out.hi);
    return out;
}

// Brute-force discrimination probability: measure the projector onto the
// positive eigenspace of rho - sigma, built from the analytic eigensystem.
inline double brute_force_discrimination(const DensityMatrix& rho, const DensityMatrix& sigma) {
    const ComplexMatrix delta = rho.matrix() - sigma.matrix();
    const Analytic2x2 es = analytic_eigensystem_2x2(delta);
    ComplexMatrix proj(2);
    auto add_outer = [&proj](const std::vector<Complex>& v) {
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                proj.at(r, c) += v[static_cast<size_t>(r)] * std::conj(v[static_cast<size_t>(c)]);
    };
    if (es.lo > 0.0) add_outer(es.vec_lo);
    if (es.hi > 0.0) add_outer(es.vec_hi);
    const ComplexMatrix anti = ComplexMatrix::identity(2) - proj;
    const double on_rho = (proj * rho.matrix()).trace().real();
    const double on_sigma = (anti * sigma.matrix()).trace().real();
    return 0.5 * (on_rho + on_sigma);
}

// Scalar fidelity for commuting (diagonal) inputs: sum sqrt(a_i b_i).
inline double commuting_fidelity(const std::vector<double>& a, const std::vector<double>& b) {
    double f = 0.0;
    for (size_t i = 0; i < a.size(); ++i) f += std::sqrt(a[i] * b[i]);
    return f;
}

} // namespace tdpp::test
