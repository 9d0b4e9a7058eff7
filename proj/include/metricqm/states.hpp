// states.hpp: pure states, ensembles, density operators and measurement statistics
// under either the standard normalization or the metric condition <psi|A|psi> = 1.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "metricqm/linalg.hpp"
#include "metricqm/metric.hpp"

namespace metricqm {

class NormalizationMismatch : public Error {
public:
    using Error::Error;
};

class TraceConditionViolated : public Error {
public:
    using Error::Error;
};

enum class Normalization { Standard, Metric };

std::string to_string(Normalization n);

namespace tol {
inline constexpr double state_norm = 1e-12;
inline constexpr double weight_sum = 1e-12;
inline constexpr double trace_condition = 1e-10;
inline constexpr double idempotent = 1e-10;
}  // namespace tol

class PureState {
public:
    // Throws NormalizationMismatch unless <psi|psi> = 1 within 1e-12.
    static PureState standard(ComplexVector v);
    // Throws NormalizationMismatch unless <psi|A|psi> = 1 within 1e-12.
    static PureState metric(ComplexVector v, const MetricOperator& a);

    const ComplexVector& vector() const noexcept { return vector_; }
    std::size_t dim() const noexcept { return vector_.dim(); }
    Normalization normalization() const noexcept { return normalization_; }
    // The metric this state is normalized against (Metric only).
    const std::optional<MetricOperator>& reference() const noexcept { return reference_; }

    // True if tagged Metric and <psi|A|psi> = 1 within 1e-12 for this `a`.
    bool is_metric_normalized_for(const MetricOperator& a) const;

private:
    PureState(ComplexVector v, Normalization n, std::optional<MetricOperator> ref)
        : vector_(std::move(v)), normalization_(n), reference_(std::move(ref)) {}

    ComplexVector vector_;
    Normalization normalization_;
    std::optional<MetricOperator> reference_;
};

// psi / sqrt(<psi|A|psi>); global phase preserved. Throws ZeroVector.
PureState normalize_a(const ComplexVector& psi, const MetricOperator& a);
// psi / ||psi||. Throws ZeroVector.
PureState normalize_standard(const ComplexVector& psi);

struct EnsembleMember {
    double weight;
    PureState state;
};

class Ensemble {
public:
    // Non-empty, weights >= 0 summing to 1 within 1e-12, one dim and one
    // normalization tag across members.
    explicit Ensemble(std::vector<EnsembleMember> members);

    const std::vector<EnsembleMember>& members() const noexcept { return members_; }
    std::size_t dim() const noexcept { return members_.front().state.dim(); }
    std::size_t size() const noexcept { return members_.size(); }
    Normalization normalization() const noexcept { return members_.front().state.normalization(); }
    const std::optional<MetricOperator>& reference() const noexcept {
        return members_.front().state.reference();
    }

    bool is_metric_normalized_for(const MetricOperator& a) const;

private:
    std::vector<EnsembleMember> members_;
};

// Same weights, every member replaced by its A-normalized ray.
Ensemble normalize_ensemble_a(const Ensemble& e, const MetricOperator& a);
// Same weights, every member replaced by its unit-vector ray.
Ensemble normalize_ensemble_standard(const Ensemble& e);

enum class TraceConvention { Standard, Metric };

class DensityOperator {
public:
    // Hermitian within 1e-12, min eigenvalue >= -1e-10, Tr(rho) = 1 within 1e-10.
    static DensityOperator standard(ComplexMatrix m);
    // Same, with Tr(A rho) = 1 within 1e-10.
    static DensityOperator metric(ComplexMatrix m, const MetricOperator& a);

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return matrix_.dim(); }
    TraceConvention convention() const noexcept { return convention_; }
    const std::optional<MetricOperator>& reference() const noexcept { return reference_; }

private:
    DensityOperator(ComplexMatrix m, TraceConvention c, std::optional<MetricOperator> ref)
        : matrix_(std::move(m)), convention_(c), reference_(std::move(ref)) {}

    ComplexMatrix matrix_;
    TraceConvention convention_;
    std::optional<MetricOperator> reference_;
};

class MeasurementProjector {
public:
    // Hermitian within 1e-12 and M^2 = M within 1e-10 (Frobenius).
    MeasurementProjector(ComplexMatrix m, std::string label);

    // |v><v| / <v|v>
    static MeasurementProjector onto(const ComplexVector& v, std::string label);
    // |k><k|
    static MeasurementProjector computational(std::size_t dim, std::size_t k);

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    const std::string& label() const noexcept { return label_; }
    std::size_t dim() const noexcept { return matrix_.dim(); }

private:
    ComplexMatrix matrix_;
    std::string label_;
};

// Qubit bases. Throws std::invalid_argument for unknown names or dim != 2.
std::vector<PureState> basis_states(const std::string& name, std::size_t dim = 2);

// (|00> + |11>) / sqrt(2)
PureState bell_state();

DensityOperator ensemble_to_density(const Ensemble& e);

// sum_i p_i |psi_i><psi_i| with each psi_i rescaled to unit standard norm: the
// operational mixed state an ensemble realizes, whatever its normalization tag.
ComplexMatrix operational_density(const Ensemble& e);

struct TraceCheck {
    double value;
    bool pass;
};

TraceCheck check_trace_condition(const DensityOperator& rho, const MetricOperator& a);

struct ProbabilityReading {
    double value;      // Re Tr(A M rho), never clamped
    double imaginary;  // Im Tr(A M rho), model-consistency diagnostic

    bool negative() const noexcept { return value < 0.0; }
    double clamped() const noexcept;
};

ProbabilityReading probability_weighted(const MeasurementProjector& m, const DensityOperator& rho,
                                        const MetricOperator& a);
double probability_standard(const MeasurementProjector& m, const DensityOperator& rho);

// {"normalization": "metric"|"standard", "members": [{"weight": p, "state": <vector>}]}
nlohmann::json to_json(const Ensemble& e);
// A metric-tagged ensemble needs the metric it is normalized against.
Ensemble ensemble_from_json(const nlohmann::json& j, const std::optional<MetricOperator>& a = std::nullopt);

}  // namespace metricqm
