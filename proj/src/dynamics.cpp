#include "metricqm/dynamics.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace metricqm {

UnitaryGate::UnitaryGate(ComplexMatrix m, std::string label) : matrix_(std::move(m)), label_(std::move(label)) {
    const double dev = frobenius_distance(dagger(matrix_) * matrix_, ComplexMatrix::identity(matrix_.dim()));
    if (dev > tol::unitary) {
        throw std::invalid_argument("UnitaryGate '" + label_ + "': U^dagger U != I (deviation " +
                                    std::to_string(dev) + ")");
    }
}

UnitaryGate UnitaryGate::hadamard() {
    const double h = std::numbers::sqrt2 / 2.0;
    return UnitaryGate(ComplexMatrix{{h, h}, {h, -h}}, "H");
}

UnitaryGate UnitaryGate::pauli_x() { return UnitaryGate(pauli::x(), "X"); }
UnitaryGate UnitaryGate::pauli_z() { return UnitaryGate(pauli::z(), "Z"); }
UnitaryGate UnitaryGate::identity(std::size_t dim) { return UnitaryGate(ComplexMatrix::identity(dim), "I"); }

UnitaryGate UnitaryGate::rot_z(double theta) {
    return UnitaryGate(ComplexMatrix{{std::polar(1.0, -theta / 2.0), 0.0}, {0.0, std::polar(1.0, theta / 2.0)}},
                       "rot:z:" + std::to_string(theta));
}

UnitaryGate UnitaryGate::rot_y(double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    return UnitaryGate(ComplexMatrix{{c, -s}, {s, c}}, "rot:y:" + std::to_string(theta));
}

UnitaryGate UnitaryGate::named(const std::string& name) {
    if (name == "H") return hadamard();
    if (name == "X") return pauli_x();
    if (name == "Z") return pauli_z();
    if (name == "I") return identity();
    for (const char axis : {'z', 'y'}) {
        const std::string prefix = std::string("rot:") + axis + ":";
        if (name.rfind(prefix, 0) != 0) continue;
        const std::string arg = name.substr(prefix.size());
        double theta = 0.0;
        const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), theta);
        if (ec != std::errc() || ptr != arg.data() + arg.size() || arg.empty() || !std::isfinite(theta)) {
            throw std::invalid_argument("unitary '" + name + "': bad angle");
        }
        auto gate = axis == 'z' ? rot_z(theta) : rot_y(theta);
        return UnitaryGate(gate.matrix(), name);
    }
    throw std::invalid_argument("unknown unitary '" + name + "'");
}

namespace {

void require_metric_normalized(const PureState& psi, const MetricOperator& a, const char* where) {
    if (psi.dim() != a.dim()) throw DimensionMismatch(std::string(where) + ": state and metric dims differ");
    if (!psi.is_metric_normalized_for(a)) {
        throw NormalizationMismatch(std::string(where) + ": input state is not metric-normalized for A");
    }
}

void require_dims(const UnitaryGate& u, const MetricOperator& a, const char* where) {
    if (u.dim() != a.dim()) throw DimensionMismatch(std::string(where) + ": unitary and metric dims differ");
}

}  // namespace

NormShift norm_shift(const PureState& psi, const UnitaryGate& u, const MetricOperator& a) {
    require_dims(u, a, "norm_shift");
    require_metric_normalized(psi, a, "norm_shift");
    const auto moved = u.matrix() * psi.vector();
    return {a_norm_squared(psi.vector(), a), a_norm_squared(moved, a)};
}

EvolutionRecord evolve_pure(const PureState& psi, const UnitaryGate& u, const MetricOperator& a) {
    require_dims(u, a, "evolve_pure");
    require_metric_normalized(psi, a, "evolve_pure");
    const auto moved = u.matrix() * psi.vector();
    const double factor = a_norm_squared(moved, a);
    if (!(factor > 0.0)) throw Error("evolve_pure: vanishing normalization factor");
    auto out = PureState::metric(moved * cplx(1.0 / std::sqrt(factor)), a);
    return {psi, std::move(out), factor};
}

DensityOperator evolve_ensemble(const Ensemble& e, const UnitaryGate& u, const MetricOperator& a) {
    require_dims(u, a, "evolve_ensemble");
    if (e.normalization() != Normalization::Metric) {
        throw NormalizationMismatch("evolve_ensemble: ensemble is standard-normalized; A-normalize it first");
    }
    ComplexMatrix rho(a.dim());
    for (const auto& m : e.members()) {
        require_metric_normalized(m.state, a, "evolve_ensemble");
        const auto moved = u.matrix() * m.state.vector();
        const double factor = a_norm_squared(moved, a);
        rho += (m.weight / factor) * ComplexMatrix::outer(moved, moved);
    }
    return DensityOperator::metric(std::move(rho), a);
}

double convexity_defect(const Ensemble& e1, const Ensemble& e2, const UnitaryGate& u, const MetricOperator& a) {
    const double mismatch = frobenius_distance(operational_density(e1), operational_density(e2));
    if (mismatch > tol::same_density) {
        throw PreconditionViolated("convexity_defect: ensembles realize different mixed states (distance " +
                                   std::to_string(mismatch) + ")");
    }
    const auto rho1 = evolve_ensemble(normalize_ensemble_a(e1, a), u, a);
    const auto rho2 = evolve_ensemble(normalize_ensemble_a(e2, a), u, a);
    return trace_distance(rho1.matrix(), rho2.matrix());
}

}  // namespace metricqm
