#pragma once

#include <complex>
#include <vector>

namespace tdpp {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major. Substrate for density matrices,
/// unitary operators and the Pauli constants; dimensions stay tiny (2 or 4).
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim) : dim_(dim), data_(static_cast<size_t>(dim) * dim) {}
    ComplexMatrix(int dim, std::vector<Complex> entries);

    static ComplexMatrix identity(int dim);
    static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }

    int dim() const { return dim_; }
    Complex& at(int row, int col) { return data_[static_cast<size_t>(row) * dim_ + col]; }
    const Complex& at(int row, int col) const { return data_[static_cast<size_t>(row) * dim_ + col]; }

    ComplexMatrix adjoint() const;
    Complex trace() const;

    ComplexMatrix operator+(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix scaled(Complex factor) const;

    /// Largest entrywise |a_ij - b_ij|; used by the invariant checks.
    double max_abs_diff(const ComplexMatrix& other) const;
    double hermiticity_defect() const;
    bool is_hermitian(double tol) const;

private:
    int dim_ = 0;
    std::vector<Complex> data_;
};

struct EigenSystem {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Input hermiticity is
/// the caller's contract; only the lower triangle is trusted implicitly.
EigenSystem hermitian_eigensystem(const ComplexMatrix& m);

/// V f(Lambda) V^dagger for a Hermitian matrix.
ComplexMatrix hermitian_function(const ComplexMatrix& m, double (*fn)(double));

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues in [-floor_tol, 0) are clamped to 0; anything lower throws.
ComplexMatrix sqrt_psd(const ComplexMatrix& m, double floor_tol);

} // namespace tdpp
