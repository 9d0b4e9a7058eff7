// protocol.hpp: Alice/Bob steering protocol under an Alice-local metric A
//
// Bob measures his half of a shared two-qubit state in one of several bases,
// which steers Alice's qubit into a basis-dependent ensemble. Alice applies the
// renormalized evolution and measures a projector with probability Re Tr(A M rho).
// Any dependence of her statistics on Bob's basis is a signal.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "metricqm/dynamics.hpp"
#include "metricqm/metric.hpp"
#include "metricqm/states.hpp"

namespace metricqm {

namespace tol {
inline constexpr double signalling_verdict = 1e-8;  // on signalling_magnitude
inline constexpr double certify_threshold = 1e-6;   // default search threshold
inline constexpr double zero_branch = 1e-14;        // Bob outcome probability treated as zero
}  // namespace tol

// Orthonormal qubit basis on Bob's side.
class QubitBasis {
public:
    QubitBasis(std::string name, ComplexVector first, ComplexVector second);

    // "computational" or "diagonal".
    static QubitBasis named(const std::string& name);
    // Columns of a 2x2 unitary.
    static QubitBasis from_unitary(const ComplexMatrix& u, std::string name);

    const std::string& name() const noexcept { return name_; }
    const std::array<ComplexVector, 2>& vectors() const noexcept { return vectors_; }

private:
    std::string name_;
    std::array<ComplexVector, 2> vectors_;
};

// Alice's conditional ensemble after Bob measures `basis` on his (second) qubit.
// Weights follow the standard Born rule on the shared state; states are unit
// vectors. Zero-probability branches are dropped.
Ensemble steer(const PureState& shared, const QubitBasis& basis);

struct ProtocolConfig {
    ProtocolConfig(MetricOperator metric, UnitaryGate alice_unitary, std::vector<QubitBasis> bob_bases,
                   MeasurementProjector alice_projector, PureState shared_state = bell_state());

    MetricOperator metric;
    UnitaryGate alice_unitary;
    std::vector<QubitBasis> bob_bases;
    MeasurementProjector alice_projector;
    PureState shared_state;
};

// The example configuration: A = diag(1, lambda), U = H, M = |0><0|,
// Bob in {computational, diagonal}.
ProtocolConfig example_config(double lambda);

struct BasisResult {
    std::string basis;
    Ensemble alice_ensemble;  // as steered, standard-normalized
    DensityOperator final_density;
    ProbabilityReading probability;
};

struct ProtocolOutcome {
    std::vector<BasisResult> per_basis;  // in cfg.bob_bases order
    double signalling_magnitude = 0.0;   // pairwise max
    double probability_gap = 0.0;        // max - min probability
    double frobenius_gap = 0.0;          // pairwise max ||rho_i - rho_j||_F on raw densities
    bool signalling = false;             // signalling_magnitude > 1e-8
};

ProtocolOutcome run_protocol(const ProtocolConfig& cfg);

// Trace distance of A^{1/2} rho A^{1/2}; both inputs must satisfy Tr(A rho) = 1.
double signalling_magnitude(const DensityOperator& rho1, const DensityOperator& rho2, const MetricOperator& a);

// Rank-1 projector maximizing |Re Tr(A M (rho1 - rho2))|.
MeasurementProjector best_distinguishing_projector(const ComplexMatrix& rho1, const ComplexMatrix& rho2,
                                                   const MetricOperator& a);

struct SignallingWitness {
    UnitaryGate unitary;
    std::array<QubitBasis, 2> bases;
    MeasurementProjector projector;
    double probability_gap;
    double signalling_magnitude;
    std::size_t trial;  // 1-based
};

struct SignallingCertificate {
    MetricOperator metric;
    bool found = false;
    std::optional<SignallingWitness> witness;
    std::size_t trials_used = 0;
    std::uint64_t seed = 0;
    double threshold = tol::certify_threshold;
    // Set when A = c I; c != 1 is flagged in reports.
    std::optional<double> scalar_multiple;
};

// Trial 1: H with {computational, diagonal} and M = |0><0|. Trial 2: V H V^dagger
// with V the eigenbasis of A. Later trials: Haar-random U and Bob bases. Qubit
// metrics only.
SignallingCertificate certify(const MetricOperator& a, std::size_t trials, std::uint64_t seed,
                              double threshold = tol::certify_threshold);

ProtocolOutcome replay_witness(const MetricOperator& a, const SignallingWitness& w);

struct SweepRow {
    double lambda;
    double p_z;
    double p_x;
    double gap;
    double magnitude;
};

// One protocol run per lambda with A = diag(1, lambda), bases {computational, diagonal}.
std::vector<SweepRow> sweep_lambda(const std::vector<double>& lambdas, const UnitaryGate& u,
                                   const MeasurementProjector& m);

// %.17g, round-trips through strtod.
std::string format_double(double x);

// Header `lambda,p_z,p_x,gap,magnitude`.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

nlohmann::json to_json(const QubitBasis& b);
nlohmann::json to_json(const SignallingCertificate& c);
nlohmann::json to_json(const ProtocolOutcome& o);

}  // namespace metricqm
