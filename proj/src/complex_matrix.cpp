#include "tdpp/complex_matrix.hpp"

#include "tdpp/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tdpp {

ComplexMatrix::ComplexMatrix(int dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
    if (dim <= 0) throw std::invalid_argument("matrix dimension must be positive");
    if (data_.size() != static_cast<size_t>(dim) * dim)
        throw std::invalid_argument("entry count does not match declared dimension");
}

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) out.at(c, r) = std::conj(at(r, c));
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (int i = 0; i < dim_; ++i) t += at(i, i);
    return t;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw std::invalid_argument("dimension mismatch");
    ComplexMatrix out(dim_);
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + rhs.data_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw std::invalid_argument("dimension mismatch");
    ComplexMatrix out(dim_);
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - rhs.data_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw std::invalid_argument("dimension mismatch");
    ComplexMatrix out(dim_);
    for (int r = 0; r < dim_; ++r)
        for (int k = 0; k < dim_; ++k) {
            const Complex a = at(r, k);
            if (a == Complex{}) continue;
            for (int c = 0; c < dim_; ++c) out.at(r, c) += a * rhs.at(k, c);
        }
    return out;
}

ComplexMatrix ComplexMatrix::scaled(Complex factor) const {
    ComplexMatrix out(dim_);
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * factor;
    return out;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
    if (dim_ != other.dim_) throw std::invalid_argument("dimension mismatch");
    double worst = 0.0;
    for (size_t i = 0; i < data_.size(); ++i)
        worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
    return worst;
}

double ComplexMatrix::hermiticity_defect() const {
    double worst = 0.0;
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c)
            worst = std::max(worst, std::abs(at(r, c) - std::conj(at(c, r))));
    return worst;
}

bool ComplexMatrix::is_hermitian(double tol) const { return hermiticity_defect() <= tol; }

namespace {

double off_diagonal_norm_sq(const ComplexMatrix& a) {
    double s = 0.0;
    for (int p = 0; p < a.dim(); ++p)
        for (int q = p + 1; q < a.dim(); ++q) s += std::norm(a.at(p, q));
    return s;
}

// One complex Jacobi rotation annihilating a(p,q). The phase of a(p,q) is
// stripped first so the classic real-symmetric rotation applies.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, int p, int q) {
    const Complex apq = a.at(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;
    const Complex phase = apq / mag;  // e^{i phi}
    const double app = a.at(p, p).real();
    const double aqq = a.at(q, q).real();

    const double tau = (aqq - app) / (2.0 * mag);
    double t;
    if (tau >= 0.0)
        t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
    else
        t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    // R differs from identity only in the (p,q) plane:
    //   R[p][p] = c          R[p][q] = s
    //   R[q][p] = -s e^{-i phi}   R[q][q] = c e^{-i phi}
    const Complex rqp = -s * std::conj(phase);
    const Complex rqq = c * std::conj(phase);

    const int n = a.dim();
    // A <- A R (columns p, q change)
    for (int r = 0; r < n; ++r) {
        const Complex arp = a.at(r, p), arq = a.at(r, q);
        a.at(r, p) = arp * c + arq * rqp;
        a.at(r, q) = arp * s + arq * rqq;
    }
    // A <- R^dagger A (rows p, q change)
    for (int col = 0; col < n; ++col) {
        const Complex apc = a.at(p, col), aqc = a.at(q, col);
        a.at(p, col) = c * apc + std::conj(rqp) * aqc;
        a.at(q, col) = s * apc + std::conj(rqq) * aqc;
    }
    a.at(p, q) = 0.0;
    a.at(q, p) = 0.0;
    a.at(p, p) = Complex(a.at(p, p).real(), 0.0);
    a.at(q, q) = Complex(a.at(q, q).real(), 0.0);

    // V <- V R
    for (int r = 0; r < n; ++r) {
        const Complex vrp = v.at(r, p), vrq = v.at(r, q);
        v.at(r, p) = vrp * c + vrq * rqp;
        v.at(r, q) = vrp * s + vrq * rqq;
    }
}

} // namespace

EigenSystem hermitian_eigensystem(const ComplexMatrix& m) {
    const int n = m.dim();
    if (n <= 0) throw std::invalid_argument("empty matrix");
    ComplexMatrix a = m;
    ComplexMatrix v = ComplexMatrix::identity(n);

    constexpr int kMaxSweeps = 100;
    constexpr double kOffTol = 1e-28;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm_sq(a) < kOffTol) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    }
    if (off_diagonal_norm_sq(a) > 1e-18)
        throw std::runtime_error("jacobi eigensolver failed to converge");

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&a](int i, int j) { return a.at(i, i).real() < a.at(j, j).real(); });

    EigenSystem out;
    out.eigenvalues.resize(static_cast<size_t>(n));
    out.eigenvectors = ComplexMatrix(n);
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[static_cast<size_t>(k)] = a.at(order[k], order[k]).real();
        for (int r = 0; r < n; ++r) out.eigenvectors.at(r, k) = v.at(r, order[k]);
    }
    return out;
}

ComplexMatrix hermitian_function(const ComplexMatrix& m, double (*fn)(double)) {
    const EigenSystem es = hermitian_eigensystem(m);
    const int n = m.dim();
    ComplexMatrix out(n);
    for (int k = 0; k < n; ++k) {
        const double f = fn(es.eigenvalues[static_cast<size_t>(k)]);
        if (f == 0.0) continue;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                out.at(r, c) += f * es.eigenvectors.at(r, k) * std::conj(es.eigenvectors.at(c, k));
    }
    return out;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& m, double floor_tol) {
    const EigenSystem es = hermitian_eigensystem(m);
    const int n = m.dim();
    ComplexMatrix out(n);
    for (int k = 0; k < n; ++k) {
        double lambda = es.eigenvalues[static_cast<size_t>(k)];
        if (lambda < -floor_tol)
            throw std::invalid_argument("matrix is not positive semidefinite");
        if (lambda < kSpectralNoiseFloor) lambda = 0.0;
        const double f = std::sqrt(lambda);
        if (f == 0.0) continue;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                out.at(r, c) += f * es.eigenvectors.at(r, k) * std::conj(es.eigenvectors.at(c, k));
    }
    return out;
}

} // namespace tdpp
