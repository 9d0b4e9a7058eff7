#include "metricqm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace metricqm {

namespace {

bool all_finite(std::span<const cplx> xs) {
    return std::all_of(xs.begin(), xs.end(), [](const cplx& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

void require_same_dim(std::size_t a, std::size_t b, const char* where) {
    if (a != b) {
        std::ostringstream os;
        os << where << ": dimension mismatch (" << a << " vs " << b << ")";
        throw DimensionMismatch(os.str());
    }
}

std::string format_quantity(const std::string& what, double value) {
    std::ostringstream os;
    os.precision(17);
    os << what << " (" << value << ")";
    return os.str();
}

}  // namespace

NotHermitian::NotHermitian(const std::string& where, double deviation)
    : Error(format_quantity(where + ": matrix is not Hermitian, max |a - a^dagger|", deviation)),
      deviation_(deviation) {}

NotPositive::NotPositive(const std::string& what, double min_eigenvalue)
    : Error(format_quantity(what + ", min eigenvalue", min_eigenvalue)),
      min_eigenvalue_(min_eigenvalue) {}

// ------------------------------- Vector -------------------------------------

ComplexVector::ComplexVector(std::size_t dim) : entries_(dim) {
    if (dim == 0) throw std::invalid_argument("ComplexVector: dim must be > 0");
}

ComplexVector::ComplexVector(std::vector<cplx> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("ComplexVector: dim must be > 0");
    if (!all_finite(entries_)) throw std::invalid_argument("ComplexVector: non-finite entry");
}

ComplexVector::ComplexVector(std::initializer_list<cplx> entries)
    : ComplexVector(std::vector<cplx>(entries)) {}

ComplexVector ComplexVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw std::out_of_range("ComplexVector::basis: index out of range");
    ComplexVector v(dim);
    v[index] = 1.0;
    return v;
}

double ComplexVector::norm() const {
    double s = 0.0;
    for (const auto& z : entries_) s += std::norm(z);
    return std::sqrt(s);
}

ComplexVector& ComplexVector::operator+=(const ComplexVector& other) {
    require_same_dim(dim(), other.dim(), "vector +");
    for (std::size_t i = 0; i < dim(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& other) {
    require_same_dim(dim(), other.dim(), "vector -");
    for (std::size_t i = 0; i < dim(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

ComplexVector& ComplexVector::operator*=(cplx s) {
    for (auto& z : entries_) z *= s;
    return *this;
}

ComplexVector operator+(ComplexVector a, const ComplexVector& b) { return a += b; }
ComplexVector operator-(ComplexVector a, const ComplexVector& b) { return a -= b; }
ComplexVector operator*(cplx s, ComplexVector v) { return v *= s; }
ComplexVector operator*(ComplexVector v, cplx s) { return v *= s; }

cplx vdot(const ComplexVector& a, const ComplexVector& b) {
    require_same_dim(a.dim(), b.dim(), "vdot");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

ComplexVector conj(const ComplexVector& v) {
    ComplexVector out(v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i) out[i] = std::conj(v[i]);
    return out;
}

// ------------------------------- Matrix -------------------------------------

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
    if (dim == 0) throw std::invalid_argument("ComplexMatrix: dim must be > 0");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (dim == 0) throw std::invalid_argument("ComplexMatrix: dim must be > 0");
    if (entries_.size() != dim * dim) {
        throw DimensionMismatch("ComplexMatrix: entries length must equal dim^2");
    }
    if (!all_finite(entries_)) throw std::invalid_argument("ComplexMatrix: non-finite entry");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : ComplexMatrix(rows.size()) {
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != dim_) throw DimensionMismatch("ComplexMatrix: ragged row list");
        std::copy(row.begin(), row.end(), entries_.begin() + static_cast<std::ptrdiff_t>(r * dim_));
        ++r;
    }
    if (!all_finite(entries_)) throw std::invalid_argument("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diag(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    if (!all_finite(m.entries_)) throw std::invalid_argument("ComplexMatrix::diag: non-finite entry");
    return m;
}

ComplexMatrix ComplexMatrix::diag(std::initializer_list<double> values) {
    return diag(std::span<const double>(values.begin(), values.size()));
}

ComplexMatrix ComplexMatrix::outer(const ComplexVector& a, const ComplexVector& b) {
    require_same_dim(a.dim(), b.dim(), "outer");
    ComplexMatrix m(a.dim());
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c) m(r, c) = a[r] * std::conj(b[c]);
    return m;
}

ComplexMatrix ComplexMatrix::from_columns(std::span<const ComplexVector> columns) {
    const std::size_t n = columns.size();
    ComplexMatrix m(n);
    for (std::size_t c = 0; c < n; ++c) {
        require_same_dim(columns[c].dim(), n, "from_columns");
        for (std::size_t r = 0; r < n; ++r) m(r, c) = columns[c][r];
    }
    return m;
}

ComplexVector ComplexMatrix::column(std::size_t c) const {
    ComplexVector v(dim_);
    for (std::size_t r = 0; r < dim_; ++r) v[r] = (*this)(r, c);
    return v;
}

cplx ComplexMatrix::trace() const {
    cplx s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += (*this)(i, i);
    return s;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : entries_) s += std::norm(z);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : entries_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::hermiticity_deviation() const {
    double dev = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = r; c < dim_; ++c)
            dev = std::max(dev, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return dev;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_dim(dim_, other.dim_, "matrix +");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_dim(dim_, other.dim_, "matrix -");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& z : entries_) z *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v) {
    require_same_dim(a.dim(), v.dim(), "matvec");
    ComplexVector out(v.dim());
    for (std::size_t r = 0; r < a.dim(); ++r) {
        cplx s = 0.0;
        for (std::size_t c = 0; c < a.dim(); ++c) s += a(r, c) * v[c];
        out[r] = s;
    }
    return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a.dim(), b.dim(), "matmul");
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx ark = a(r, k);
            for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
        }
    return out;
}

ComplexMatrix dagger(const ComplexMatrix& a) {
    ComplexMatrix out(a.dim());
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c) out(c, r) = std::conj(a(r, c));
    return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    ComplexMatrix out(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j)
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
    return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = 0; k < b.dim(); ++k) out[i * b.dim() + k] = a[i] * b[k];
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::pair<std::size_t, std::size_t> dims,
                            Subsystem keep) {
    const auto [d1, d2] = dims;
    if (d1 == 0 || d2 == 0) throw std::invalid_argument("partial_trace: dims must be > 0");
    require_same_dim(rho.dim(), d1 * d2, "partial_trace");

    if (keep == Subsystem::First) {
        ComplexMatrix out(d1);
        for (std::size_t i = 0; i < d1; ++i)
            for (std::size_t k = 0; k < d1; ++k) {
                cplx s = 0.0;
                for (std::size_t b = 0; b < d2; ++b) s += rho(i * d2 + b, k * d2 + b);
                out(i, k) = s;
            }
        return out;
    }
    ComplexMatrix out(d2);
    for (std::size_t i = 0; i < d2; ++i)
        for (std::size_t k = 0; k < d2; ++k) {
            cplx s = 0.0;
            for (std::size_t a = 0; a < d1; ++a) s += rho(a * d2 + i, a * d2 + k);
            out(i, k) = s;
        }
    return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return matmul(a, b) - matmul(b, a);
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).frobenius_norm();
}

// ------------------------------- Spectral -----------------------------------

ComplexMatrix EigenDecomposition::reconstruct() const {
    const std::size_t n = eigenvectors.dim();
    ComplexMatrix out(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += eigenvectors(r, k) * eigenvalues[k] * std::conj(eigenvectors(c, k));
            out(r, c) = s;
        }
    return out;
}

namespace {

double offdiag_frobenius(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c)
            if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
}

// Zero a(p,q) with J = diag-phase * real rotation acting on columns p, q:
//   J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]],  a(p,q) = |a_pq| e^{i phi}.
// a <- J^dagger a J, v <- v J.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cplx apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;
    const cplx phase = apq / mag;  // e^{i phi}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();

    const double theta = (aqq - app) / (2.0 * mag);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const cplx jpp = c;
    const cplx jpq = s;
    const cplx jqp = -s * std::conj(phase);
    const cplx jqq = c * std::conj(phase);

    const std::size_t n = a.dim();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx akp = a(k, p), akq = a(k, q);
        a(k, p) = akp * jpp + akq * jqp;
        a(k, q) = akp * jpq + akq * jqq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const cplx apk = a(p, k), aqk = a(q, k);
        a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
        a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();

    for (std::size_t k = 0; k < n; ++k) {
        const cplx vkp = v(k, p), vkq = v(k, q);
        v(k, p) = vkp * jpp + vkq * jqp;
        v(k, q) = vkp * jpq + vkq * jqq;
    }
}

}  // namespace

EigenDecomposition hermitian_eigen(const ComplexMatrix& input) {
    const double dev = input.hermiticity_deviation();
    if (dev > tol::hermitian) throw NotHermitian("hermitian_eigen", dev);

    const std::size_t n = input.dim();
    // Symmetrize so the working copy is exactly Hermitian.
    ComplexMatrix a = 0.5 * (input + dagger(input));
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double threshold = tol::jacobi_offdiag * std::max(1.0, input.frobenius_norm());
    int sweep = 0;
    while (offdiag_frobenius(a) >= threshold) {
        if (sweep++ >= tol::jacobi_max_sweeps) {
            throw NonConvergence("hermitian_eigen: no convergence after " +
                                 std::to_string(tol::jacobi_max_sweeps) + " sweeps");
        }
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
    }
    return out;
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& a) {
    auto eig = hermitian_eigen(a);
    if (eig.eigenvalues.front() < -tol::positivity) {
        throw NotPositive("matrix_sqrt_psd: matrix is not positive semidefinite",
                          eig.eigenvalues.front());
    }
    for (auto& lambda : eig.eigenvalues) lambda = std::sqrt(std::max(lambda, 0.0));
    auto s = eig.reconstruct();
    return 0.5 * (s + dagger(s));
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a.dim(), b.dim(), "trace_distance");
    for (const auto* m : {&a, &b}) {
        const double dev = m->hermiticity_deviation();
        if (dev > tol::hermitian) throw NotHermitian("trace_distance", dev);
    }
    const auto eig = hermitian_eigen(a - b);
    double s = 0.0;
    for (double lambda : eig.eigenvalues) s += std::abs(lambda);
    return 0.5 * s;
}

}  // namespace metricqm
