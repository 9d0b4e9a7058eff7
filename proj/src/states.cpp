#include "metricqm/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "metricqm/json_io.hpp"

namespace metricqm {

using nlohmann::json;

std::string to_string(Normalization n) { return n == Normalization::Metric ? "metric" : "standard"; }

namespace {

bool same_metric(const MetricOperator& a, const MetricOperator& b) {
    return a.dim() == b.dim() && (a.matrix() - b.matrix()).max_abs() <= tol::hermitian;
}

std::string describe(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

// ------------------------------- PureState ----------------------------------

PureState PureState::standard(ComplexVector v) {
    const double n2 = vdot(v, v).real();
    if (std::abs(n2 - 1.0) > tol::state_norm) {
        throw NormalizationMismatch("PureState::standard: <psi|psi> = " + describe(n2));
    }
    return PureState(std::move(v), Normalization::Standard, std::nullopt);
}

PureState PureState::metric(ComplexVector v, const MetricOperator& a) {
    if (v.dim() != a.dim()) throw DimensionMismatch("PureState::metric: state and metric dims differ");
    const double n2 = a_norm_squared(v, a);
    if (std::abs(n2 - 1.0) > tol::state_norm) {
        throw NormalizationMismatch("PureState::metric: <psi|A|psi> = " + describe(n2));
    }
    return PureState(std::move(v), Normalization::Metric, a);
}

bool PureState::is_metric_normalized_for(const MetricOperator& a) const {
    if (normalization_ != Normalization::Metric || dim() != a.dim()) return false;
    return std::abs(a_norm_squared(vector_, a) - 1.0) <= tol::state_norm;
}

PureState normalize_a(const ComplexVector& psi, const MetricOperator& a) {
    if (psi.dim() != a.dim()) throw DimensionMismatch("normalize_a: state and metric dims differ");
    const double n2 = a_norm_squared(psi, a);
    if (!(n2 > 1e-24)) throw ZeroVector("normalize_a: vector has vanishing A-norm");
    return PureState::metric(psi * cplx(1.0 / std::sqrt(n2)), a);
}

PureState normalize_standard(const ComplexVector& psi) {
    const double n = psi.norm();
    if (!(n > 1e-12)) throw ZeroVector("normalize_standard: zero vector");
    return PureState::standard(psi * cplx(1.0 / n));
}

// ------------------------------- Ensemble -----------------------------------

Ensemble::Ensemble(std::vector<EnsembleMember> members) : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("Ensemble: no members");
    double total = 0.0;
    const auto& first = members_.front().state;
    for (const auto& m : members_) {
        if (!(m.weight >= 0.0)) throw std::invalid_argument("Ensemble: negative weight");
        total += m.weight;
        if (m.state.dim() != first.dim()) throw DimensionMismatch("Ensemble: members differ in dim");
        if (m.state.normalization() != first.normalization()) {
            throw NormalizationMismatch("Ensemble: mixed normalization tags");
        }
        if (first.normalization() == Normalization::Metric &&
            !same_metric(*m.state.reference(), *first.reference())) {
            throw NormalizationMismatch("Ensemble: members normalized against different metrics");
        }
    }
    if (std::abs(total - 1.0) > tol::weight_sum) {
        throw std::invalid_argument("Ensemble: weights sum to " + describe(total));
    }
}

bool Ensemble::is_metric_normalized_for(const MetricOperator& a) const {
    for (const auto& m : members_)
        if (!m.state.is_metric_normalized_for(a)) return false;
    return true;
}

Ensemble normalize_ensemble_a(const Ensemble& e, const MetricOperator& a) {
    std::vector<EnsembleMember> out;
    out.reserve(e.size());
    for (const auto& m : e.members()) out.push_back({m.weight, normalize_a(m.state.vector(), a)});
    return Ensemble(std::move(out));
}

Ensemble normalize_ensemble_standard(const Ensemble& e) {
    std::vector<EnsembleMember> out;
    out.reserve(e.size());
    for (const auto& m : e.members()) out.push_back({m.weight, normalize_standard(m.state.vector())});
    return Ensemble(std::move(out));
}

// ------------------------------- DensityOperator ----------------------------

namespace {

void require_physical(const ComplexMatrix& m, const char* where) {
    const double dev = m.hermiticity_deviation();
    if (dev > tol::hermitian) throw NotHermitian(where, dev);
    const auto eig = hermitian_eigen(m);
    if (eig.eigenvalues.front() < -tol::positivity) {
        throw NotPositive(std::string(where) + ": density matrix is not PSD", eig.eigenvalues.front());
    }
}

}  // namespace

DensityOperator DensityOperator::standard(ComplexMatrix m) {
    require_physical(m, "DensityOperator::standard");
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > tol::trace_condition) {
        throw TraceConditionViolated("DensityOperator::standard: Tr(rho) = " + describe(tr));
    }
    return DensityOperator(std::move(m), TraceConvention::Standard, std::nullopt);
}

DensityOperator DensityOperator::metric(ComplexMatrix m, const MetricOperator& a) {
    if (m.dim() != a.dim()) throw DimensionMismatch("DensityOperator::metric: dims differ");
    require_physical(m, "DensityOperator::metric");
    const double tr = (a.matrix() * m).trace().real();
    if (std::abs(tr - 1.0) > tol::trace_condition) {
        throw TraceConditionViolated("DensityOperator::metric: Tr(A rho) = " + describe(tr));
    }
    return DensityOperator(std::move(m), TraceConvention::Metric, a);
}

// ------------------------------- Projectors ---------------------------------

MeasurementProjector::MeasurementProjector(ComplexMatrix m, std::string label)
    : matrix_(std::move(m)), label_(std::move(label)) {
    const double dev = matrix_.hermiticity_deviation();
    if (dev > tol::hermitian) throw NotHermitian("MeasurementProjector", dev);
    const double idem = frobenius_distance(matrix_ * matrix_, matrix_);
    if (idem > tol::idempotent) {
        throw std::invalid_argument("MeasurementProjector: M^2 != M (deviation " + describe(idem) + ")");
    }
}

MeasurementProjector MeasurementProjector::onto(const ComplexVector& v, std::string label) {
    const double n2 = vdot(v, v).real();
    if (!(n2 > 1e-24)) throw ZeroVector("MeasurementProjector::onto: zero vector");
    auto p = ComplexMatrix::outer(v, v) * cplx(1.0 / n2);
    return MeasurementProjector(std::move(p), std::move(label));
}

MeasurementProjector MeasurementProjector::computational(std::size_t dim, std::size_t k) {
    return onto(ComplexVector::basis(dim, k), "|" + std::to_string(k) + "><" + std::to_string(k) + "|");
}

// ------------------------------- Constructors -------------------------------

std::vector<PureState> basis_states(const std::string& name, std::size_t dim) {
    if (dim != 2) throw std::invalid_argument("basis_states: only qubit bases (dim 2) are defined");
    const double h = std::numbers::sqrt2 / 2.0;
    if (name == "computational") {
        return {PureState::standard(ComplexVector{1.0, 0.0}), PureState::standard(ComplexVector{0.0, 1.0})};
    }
    if (name == "diagonal") {
        return {PureState::standard(ComplexVector{h, h}), PureState::standard(ComplexVector{h, -h})};
    }
    throw std::invalid_argument("basis_states: unknown basis '" + name + "'");
}

PureState bell_state() {
    const double h = std::numbers::sqrt2 / 2.0;
    return PureState::standard(ComplexVector{h, 0.0, 0.0, h});
}

DensityOperator ensemble_to_density(const Ensemble& e) {
    ComplexMatrix rho(e.dim());
    for (const auto& m : e.members()) {
        rho += m.weight * ComplexMatrix::outer(m.state.vector(), m.state.vector());
    }
    if (e.normalization() == Normalization::Metric) return DensityOperator::metric(std::move(rho), *e.reference());
    return DensityOperator::standard(std::move(rho));
}

ComplexMatrix operational_density(const Ensemble& e) {
    ComplexMatrix rho(e.dim());
    for (const auto& m : e.members()) {
        const auto& v = m.state.vector();
        rho += (m.weight / vdot(v, v).real()) * ComplexMatrix::outer(v, v);
    }
    return rho;
}

// ------------------------------- Statistics ---------------------------------

TraceCheck check_trace_condition(const DensityOperator& rho, const MetricOperator& a) {
    if (rho.dim() != a.dim()) throw DimensionMismatch("check_trace_condition: dims differ");
    const double value = (a.matrix() * rho.matrix()).trace().real();
    return {value, std::abs(value - 1.0) < tol::trace_condition};
}

double ProbabilityReading::clamped() const noexcept { return std::clamp(value, 0.0, 1.0); }

ProbabilityReading probability_weighted(const MeasurementProjector& m, const DensityOperator& rho,
                                        const MetricOperator& a) {
    if (m.dim() != rho.dim() || a.dim() != rho.dim()) {
        throw DimensionMismatch("probability_weighted: dims differ");
    }
    const cplx t = (a.matrix() * m.matrix() * rho.matrix()).trace();
    return {t.real(), t.imag()};
}

double probability_standard(const MeasurementProjector& m, const DensityOperator& rho) {
    if (m.dim() != rho.dim()) throw DimensionMismatch("probability_standard: dims differ");
    return (m.matrix() * rho.matrix()).trace().real();
}

// ------------------------------- JSON ---------------------------------------

json to_json(const Ensemble& e) {
    json members = json::array();
    for (const auto& m : e.members()) {
        members.push_back(json{{"weight", m.weight}, {"state", to_json(m.state.vector())}});
    }
    return json{{"normalization", to_string(e.normalization())}, {"members", members}};
}

Ensemble ensemble_from_json(const json& j, const std::optional<MetricOperator>& a) {
    if (!j.is_object() || !j.contains("normalization") || !j.contains("members") ||
        !j.at("members").is_array()) {
        throw ParseError("ensemble: expected {\"normalization\", \"members\"}");
    }
    const auto tag = j.at("normalization").get<std::string>();
    if (tag != "metric" && tag != "standard") throw ParseError("ensemble: unknown normalization '" + tag + "'");
    if (tag == "metric" && !a) throw ParseError("ensemble: metric normalization requires a metric operator");

    std::vector<EnsembleMember> members;
    for (const auto& m : j.at("members")) {
        if (!m.contains("weight") || !m.at("weight").is_number() || !m.contains("state")) {
            throw ParseError("ensemble member: expected {\"weight\", \"state\"}");
        }
        auto v = vector_from_json(m.at("state"));
        members.push_back({m.at("weight").get<double>(),
                           tag == "metric" ? PureState::metric(std::move(v), *a)
                                           : PureState::standard(std::move(v))});
    }
    return Ensemble(std::move(members));
}

}  // namespace metricqm
