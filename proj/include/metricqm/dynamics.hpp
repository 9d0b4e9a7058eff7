// dynamics.hpp: unitary evolution followed by state-dependent renormalization
//
//   psi  ->  U psi / sqrt(N(psi)),        N(psi) = <psi|U^dagger A U|psi>
//   rho  ->  sum_i p_i U|psi_i><psi_i|U^dagger / N(psi_i)
//
// The ensemble rule depends on the decomposition {p_i, psi_i}, not only on rho.

#pragma once

#include <string>

#include "metricqm/linalg.hpp"
#include "metricqm/metric.hpp"
#include "metricqm/states.hpp"

namespace metricqm {

class PreconditionViolated : public Error {
public:
    using Error::Error;
};

namespace tol {
inline constexpr double unitary = 1e-10;     // ||U^dagger U - I||_F
inline constexpr double commutator = 1e-12;  // ||[U, A]||_F for the linear regime
inline constexpr double same_density = 1e-10;
}  // namespace tol

class UnitaryGate {
public:
    UnitaryGate(ComplexMatrix m, std::string label);

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    const std::string& label() const noexcept { return label_; }
    std::size_t dim() const noexcept { return matrix_.dim(); }

    static UnitaryGate hadamard();
    static UnitaryGate pauli_x();
    static UnitaryGate pauli_z();
    static UnitaryGate identity(std::size_t dim = 2);
    // exp(-i theta sigma / 2)
    static UnitaryGate rot_z(double theta);
    static UnitaryGate rot_y(double theta);

    // "H", "X", "Z", "I", "rot:z:<theta>", "rot:y:<theta>". Throws std::invalid_argument.
    static UnitaryGate named(const std::string& name);

private:
    ComplexMatrix matrix_;
    std::string label_;
};

struct NormShift {
    double before;  // <psi|A|psi>
    double after;   // <psi|U^dagger A U|psi>
};

NormShift norm_shift(const PureState& psi, const UnitaryGate& u, const MetricOperator& a);

struct EvolutionRecord {
    PureState input_state;
    PureState output_state;
    double normalization_factor;  // N(psi)
};

// psi must be metric-normalized for `a` (NormalizationMismatch otherwise).
EvolutionRecord evolve_pure(const PureState& psi, const UnitaryGate& u, const MetricOperator& a);

// Every member must be metric-normalized for `a`. Output satisfies Tr(A rho) = 1.
DensityOperator evolve_ensemble(const Ensemble& e, const UnitaryGate& u, const MetricOperator& a);

// Trace distance between the evolved images of two decompositions of the same
// operational mixed state. Throws PreconditionViolated if the decompositions
// realize different states. Members of either tag are A-normalized first.
double convexity_defect(const Ensemble& e1, const Ensemble& e2, const UnitaryGate& u,
                        const MetricOperator& a);

}  // namespace metricqm
