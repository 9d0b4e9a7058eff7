// metric.hpp: metric operators A > 0 and the deformed inner product <phi|A|psi>

#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "metricqm/linalg.hpp"

namespace metricqm {

class NotPositiveDefinite : public NotPositive {
public:
    explicit NotPositiveDefinite(double min_eigenvalue);
};

class ZeroVector : public Error {
public:
    using Error::Error;
};

// A validated positive-definite Hermitian operator. Only constructible through
// validate_metric, so every instance satisfies A = A^dagger and A > 0.
class MetricOperator {
public:
    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return matrix_.dim(); }
    double min_eigenvalue() const noexcept { return eigen_.eigenvalues.front(); }
    const std::vector<double>& eigenvalues() const noexcept { return eigen_.eigenvalues; }
    const ComplexMatrix& eigenvectors() const noexcept { return eigen_.eigenvectors; }
    // Cached A^{1/2}.
    const ComplexMatrix& sqrt() const noexcept { return sqrt_; }
    double hermiticity_deviation() const noexcept { return hermiticity_deviation_; }

    // c if A = c I (spectral spread within `tolerance` relative), else nullopt.
    std::optional<double> scalar_multiple(double tolerance = 1e-12) const;

    friend MetricOperator validate_metric(const ComplexMatrix& candidate);

private:
    MetricOperator(ComplexMatrix matrix, EigenDecomposition eigen, ComplexMatrix sqrt, double dev)
        : matrix_(std::move(matrix)), eigen_(std::move(eigen)), sqrt_(std::move(sqrt)),
          hermiticity_deviation_(dev) {}

    ComplexMatrix matrix_;
    EigenDecomposition eigen_;
    ComplexMatrix sqrt_;
    double hermiticity_deviation_ = 0.0;
};

// Throws NotHermitian (deviation > 1e-12) or NotPositiveDefinite (min eigenvalue <= 1e-10).
MetricOperator validate_metric(const ComplexMatrix& candidate);

// diag(values) convenience.
MetricOperator diagonal_metric(std::initializer_list<double> values);

// <phi|A|psi>
cplx inner_product_a(const ComplexVector& phi, const ComplexVector& psi, const MetricOperator& a);
// Same formula on an unvalidated matrix; used to probe candidates that fail validation.
cplx inner_product_raw(const ComplexVector& phi, const ComplexVector& psi, const ComplexMatrix& a);

// Re <psi|A|psi>
double a_norm_squared(const ComplexVector& psi, const MetricOperator& a);

struct AxiomReport {
    double conjugate_symmetry_max_violation = 0.0;  // relative
    double linearity_max_violation = 0.0;           // relative
    double positive_definiteness_min_value = 0.0;   // min Rayleigh quotient Re<psi|A|psi>/<psi|psi>
    std::size_t samples_used = 0;
    std::uint64_t seed = 0;
    bool pass = false;
};

inline constexpr double kAxiomTolerance = 1e-10;

AxiomReport verify_axioms(const MetricOperator& a, std::size_t sample_count, std::uint64_t seed);
AxiomReport verify_axioms(const ComplexMatrix& candidate, std::size_t sample_count, std::uint64_t seed);

// A = a0 I + a_vec . (sigma_x, sigma_y, sigma_z), qubit metrics only.
struct BlochDecomposition {
    double a0 = 0.0;
    std::array<double, 3> a_vec{};

    ComplexMatrix reconstruct() const;
    // <psi|A|psi> for a pure state with Bloch vector n.
    double norm_on_bloch(const std::array<double, 3>& n) const;
};

BlochDecomposition bloch_decomposition(const MetricOperator& a);

std::array<double, 3> bloch_vector(const ComplexVector& psi);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

}  // namespace metricqm
