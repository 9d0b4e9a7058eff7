// linalg.hpp: dense complex linear algebra for small Hilbert spaces (d <= ~16)

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace metricqm {

using cplx = std::complex<double>;

// ------------------------------- Errors -------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotHermitian : public Error {
public:
    NotHermitian(const std::string& where, double deviation);
    double deviation() const noexcept { return deviation_; }

private:
    double deviation_;
};

class NotPositive : public Error {
public:
    NotPositive(const std::string& what, double min_eigenvalue);
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

// ------------------------------- Tolerances ---------------------------------

namespace tol {
inline constexpr double hermitian = 1e-12;   // max-entry |a - a^dagger|
inline constexpr double positivity = 1e-10;  // min eigenvalue
inline constexpr double jacobi_offdiag = 1e-12;
inline constexpr int jacobi_max_sweeps = 100;
}  // namespace tol

// ------------------------------- Vector -------------------------------------

class ComplexVector {
public:
    ComplexVector() = default;
    explicit ComplexVector(std::size_t dim);
    explicit ComplexVector(std::vector<cplx> entries);
    ComplexVector(std::initializer_list<cplx> entries);

    static ComplexVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const noexcept { return entries_.size(); }
    cplx& operator[](std::size_t i) { return entries_[i]; }
    const cplx& operator[](std::size_t i) const { return entries_[i]; }
    std::span<const cplx> entries() const noexcept { return entries_; }

    double norm() const;

    ComplexVector& operator+=(const ComplexVector& other);
    ComplexVector& operator-=(const ComplexVector& other);
    ComplexVector& operator*=(cplx s);

    bool operator==(const ComplexVector&) const = default;

private:
    std::vector<cplx> entries_;
};

ComplexVector operator+(ComplexVector a, const ComplexVector& b);
ComplexVector operator-(ComplexVector a, const ComplexVector& b);
ComplexVector operator*(cplx s, ComplexVector v);
ComplexVector operator*(ComplexVector v, cplx s);

// <a|b>, antilinear in the first argument.
cplx vdot(const ComplexVector& a, const ComplexVector& b);

// ------------------------------- Matrix -------------------------------------

// Square, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<cplx> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diag(std::span<const double> values);
    static ComplexMatrix diag(std::initializer_list<double> values);
    // |a><b|
    static ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b);
    static ComplexMatrix from_columns(std::span<const ComplexVector> columns);

    std::size_t dim() const noexcept { return dim_; }
    cplx& operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }
    std::span<const cplx> entries() const noexcept { return entries_; }

    ComplexVector column(std::size_t c) const;

    cplx trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    // max |a_ij - conj(a_ji)|
    double hermiticity_deviation() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx s);

    bool operator==(const ComplexMatrix&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<cplx> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, cplx s);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix dagger(const ComplexMatrix& a);
ComplexVector conj(const ComplexVector& v);

// Kronecker products.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);

enum class Subsystem { First, Second };

// Reduced matrix on `keep` of a bipartite operator on C^dims.first (x) C^dims.second.
ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            std::pair<std::size_t, std::size_t> dims,
                            Subsystem keep);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// ------------------------------- Spectral -----------------------------------

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // orthonormal columns

    ComplexMatrix reconstruct() const;
};

// Cyclic complex Jacobi. Throws NotHermitian / NonConvergence.
EigenDecomposition hermitian_eigen(const ComplexMatrix& a);

// Hermitian PSD square root; eigenvalues in [-1e-10, 0) are clamped to zero.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& a);

// 1/2 sum |eig(a - b)|
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace metricqm
