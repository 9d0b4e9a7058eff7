#include "metricqm/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "metricqm/random.hpp"

namespace metricqm {

NotPositiveDefinite::NotPositiveDefinite(double min_eigenvalue)
    : NotPositive("NotPositiveDefinite: metric must satisfy A > 0", min_eigenvalue) {}

MetricOperator validate_metric(const ComplexMatrix& candidate) {
    const double dev = candidate.hermiticity_deviation();
    if (dev > tol::hermitian) throw NotHermitian("validate_metric", dev);
    auto eig = hermitian_eigen(candidate);
    if (eig.eigenvalues.front() <= tol::positivity) {
        throw NotPositiveDefinite(eig.eigenvalues.front());
    }
    auto root = matrix_sqrt_psd(candidate);
    return MetricOperator(candidate, std::move(eig), std::move(root), dev);
}

MetricOperator diagonal_metric(std::initializer_list<double> values) {
    return validate_metric(ComplexMatrix::diag(values));
}

std::optional<double> MetricOperator::scalar_multiple(double tolerance) const {
    const double lo = eigen_.eigenvalues.front();
    const double hi = eigen_.eigenvalues.back();
    if (hi - lo > tolerance * hi) return std::nullopt;
    return 0.5 * (lo + hi);
}

cplx inner_product_raw(const ComplexVector& phi, const ComplexVector& psi, const ComplexMatrix& a) {
    return vdot(phi, a * psi);
}

cplx inner_product_a(const ComplexVector& phi, const ComplexVector& psi, const MetricOperator& a) {
    return inner_product_raw(phi, psi, a.matrix());
}

double a_norm_squared(const ComplexVector& psi, const MetricOperator& a) {
    const cplx v = inner_product_a(psi, psi, a);
    // Hermitian A makes this real up to rounding.
    if (std::abs(v.imag()) >= 1e-12 * std::max(1.0, std::abs(v.real()))) {
        throw Error("a_norm_squared: <psi|A|psi> has imaginary part " + std::to_string(v.imag()));
    }
    return v.real();
}

AxiomReport verify_axioms(const ComplexMatrix& a, std::size_t sample_count, std::uint64_t seed) {
    if (sample_count == 0) throw std::invalid_argument("verify_axioms: sample_count must be >= 1");
    Rng rng(seed);
    const std::size_t n = a.dim();

    AxiomReport report;
    report.samples_used = sample_count;
    report.seed = seed;
    report.positive_definiteness_min_value = std::numeric_limits<double>::infinity();

    for (std::size_t s = 0; s < sample_count; ++s) {
        const auto phi = random_vector(n, rng);
        const auto psi1 = random_vector(n, rng);
        const auto psi2 = random_vector(n, rng);
        const cplx c1 = rng.complex_gaussian();
        const cplx c2 = rng.complex_gaussian();

        const cplx fwd = inner_product_raw(phi, psi1, a);
        const cplx bwd = inner_product_raw(psi1, phi, a);
        const double sym_scale = std::max(1.0, std::abs(fwd) + std::abs(bwd));
        report.conjugate_symmetry_max_violation =
            std::max(report.conjugate_symmetry_max_violation, std::abs(bwd - std::conj(fwd)) / sym_scale);

        const cplx lhs = inner_product_raw(phi, c1 * psi1 + c2 * psi2, a);
        const cplx t1 = c1 * fwd;
        const cplx t2 = c2 * inner_product_raw(phi, psi2, a);
        const double lin_scale = std::max(1.0, std::abs(t1) + std::abs(t2));
        report.linearity_max_violation =
            std::max(report.linearity_max_violation, std::abs(lhs - (t1 + t2)) / lin_scale);

        for (const auto* v : {&psi1, &psi2}) {
            const double nn = vdot(*v, *v).real();
            if (nn == 0.0) continue;
            const double q = inner_product_raw(*v, *v, a).real() / nn;
            report.positive_definiteness_min_value = std::min(report.positive_definiteness_min_value, q);
        }
    }

    report.pass = report.conjugate_symmetry_max_violation < kAxiomTolerance &&
                  report.linearity_max_violation < kAxiomTolerance &&
                  report.positive_definiteness_min_value > 0.0;
    return report;
}

AxiomReport verify_axioms(const MetricOperator& a, std::size_t sample_count, std::uint64_t seed) {
    return verify_axioms(a.matrix(), sample_count, seed);
}

namespace pauli {
ComplexMatrix x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return ComplexMatrix{{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}}; }
ComplexMatrix z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

ComplexMatrix BlochDecomposition::reconstruct() const {
    return a0 * ComplexMatrix::identity(2) + a_vec[0] * pauli::x() + a_vec[1] * pauli::y() +
           a_vec[2] * pauli::z();
}

double BlochDecomposition::norm_on_bloch(const std::array<double, 3>& n) const {
    return a0 + a_vec[0] * n[0] + a_vec[1] * n[1] + a_vec[2] * n[2];
}

BlochDecomposition bloch_decomposition(const MetricOperator& a) {
    if (a.dim() != 2) throw DimensionMismatch("bloch_decomposition: metric must be 2x2");
    const auto& m = a.matrix();
    BlochDecomposition out;
    out.a0 = 0.5 * m.trace().real();
    out.a_vec[0] = 0.5 * (m * pauli::x()).trace().real();
    out.a_vec[1] = 0.5 * (m * pauli::y()).trace().real();
    out.a_vec[2] = 0.5 * (m * pauli::z()).trace().real();
    return out;
}

std::array<double, 3> bloch_vector(const ComplexVector& psi) {
    if (psi.dim() != 2) throw DimensionMismatch("bloch_vector: qubit state required");
    const double nn = vdot(psi, psi).real();
    const cplx off = std::conj(psi[0]) * psi[1];
    return {2.0 * off.real() / nn, 2.0 * off.imag() / nn,
            (std::norm(psi[0]) - std::norm(psi[1])) / nn};
}

}  // namespace metricqm
