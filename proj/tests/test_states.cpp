#include <gtest/gtest.h>

#include <cmath>

#include "metricqm/json_io.hpp"
#include "metricqm/random.hpp"
#include "metricqm/states.hpp"
#include "test_helpers.hpp"

using namespace metricqm;
using metricqm::testing::MatrixNear;
using metricqm::testing::VectorNear;

namespace {

Ensemble standard_ensemble(const std::string& basis) {
    const auto states = basis_states(basis);
    return Ensemble({{0.5, states[0]}, {0.5, states[1]}});
}

Ensemble random_metric_ensemble(const MetricOperator& a, Rng& rng, std::size_t members) {
    std::vector<double> w(members);
    double total = 0.0;
    for (auto& x : w) total += (x = rng.uniform(0.01, 1.0));
    std::vector<EnsembleMember> out;
    for (std::size_t i = 0; i < members; ++i) {
        out.push_back({w[i] / total, normalize_a(random_vector(a.dim(), rng), a)});
    }
    return Ensemble(std::move(out));
}

}  // namespace

TEST(BasisStates, Computational) {
    const auto b = basis_states("computational");
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b[0].vector(), (ComplexVector{1.0, 0.0}));
    EXPECT_EQ(b[1].vector(), (ComplexVector{0.0, 1.0}));
}

TEST(BasisStates, Diagonal) {
    const auto b = basis_states("diagonal");
    EXPECT_TRUE(VectorNear(b[0].vector(), ComplexVector{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}, 1e-15));
    EXPECT_TRUE(VectorNear(b[1].vector(), ComplexVector{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)}, 1e-15));
}

TEST(BasisStates, MutuallyUnbiased) {
    for (const auto& z : basis_states("computational"))
        for (const auto& x : basis_states("diagonal")) EXPECT_NEAR(std::norm(vdot(z.vector(), x.vector())), 0.5, 1e-15);
}

TEST(BasisStates, Errors) {
    EXPECT_THROW(basis_states("circular"), std::invalid_argument);
    EXPECT_THROW(basis_states("computational", 3), std::invalid_argument);
}

TEST(BellState, Vector) {
    const auto bell = bell_state();
    EXPECT_TRUE(VectorNear(bell.vector(), ComplexVector{1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)}, 1e-15));
    EXPECT_NEAR(bell.vector().norm(), 1.0, 1e-15);
    EXPECT_EQ(bell.normalization(), Normalization::Standard);
}

TEST(BellState, ReducedStatesMaximallyMixed) {
    const auto v = bell_state().vector();
    const auto rho = ComplexMatrix::outer(v, v);
    const auto half = ComplexMatrix::identity(2) * cplx(0.5);
    EXPECT_TRUE(MatrixNear(partial_trace(rho, {2, 2}, Subsystem::First), half, 1e-15));
    EXPECT_TRUE(MatrixNear(partial_trace(rho, {2, 2}, Subsystem::Second), half, 1e-15));
}

TEST(PureState, NormalizationInvariantsEnforced) {
    EXPECT_THROW(PureState::standard(ComplexVector{1.0, 1.0}), NormalizationMismatch);
    const auto a = diagonal_metric({1.0, 2.0});
    EXPECT_THROW(PureState::metric(ComplexVector{0.0, 1.0}, a), NormalizationMismatch);
    EXPECT_NO_THROW(PureState::metric(ComplexVector{0.0, 1.0 / std::sqrt(2.0)}, a));
}

TEST(Ensemble, Invariants) {
    const auto b = basis_states("computational");
    EXPECT_THROW(Ensemble({}), std::invalid_argument);
    EXPECT_THROW(Ensemble({{0.6, b[0]}, {0.6, b[1]}}), std::invalid_argument);
    EXPECT_THROW(Ensemble({{-0.5, b[0]}, {1.5, b[1]}}), std::invalid_argument);
    const auto a = diagonal_metric({1.0, 2.0});
    EXPECT_THROW(Ensemble({{0.5, b[0]}, {0.5, normalize_a(b[1].vector(), a)}}), NormalizationMismatch);
    EXPECT_THROW(Ensemble({{0.5, b[0]}, {0.5, bell_state()}}), DimensionMismatch);
    EXPECT_NO_THROW(Ensemble({{0.0, b[0]}, {1.0, b[1]}}));
}

TEST(EnsembleToDensity, BasisEnsemblesAreMaximallyMixed) {
    const auto half = ComplexMatrix::identity(2) * cplx(0.5);
    EXPECT_TRUE(MatrixNear(ensemble_to_density(standard_ensemble("computational")).matrix(), half, 1e-15));
    EXPECT_TRUE(MatrixNear(ensemble_to_density(standard_ensemble("diagonal")).matrix(), half, 1e-15));
}

TEST(EnsembleToDensity, SingleMemberIsProjector) {
    const auto plus = basis_states("diagonal")[0];
    const auto rho = ensemble_to_density(Ensemble({{1.0, plus}}));
    EXPECT_TRUE(MatrixNear(rho.matrix(), ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}}, 1e-15));
    EXPECT_TRUE(MatrixNear(rho.matrix() * rho.matrix(), rho.matrix(), 1e-15));
}

TEST(EnsembleToDensity, ConventionInherited) {
    const auto a = diagonal_metric({1.0, 2.0});
    const auto e = normalize_ensemble_a(standard_ensemble("diagonal"), a);
    const auto rho = ensemble_to_density(e);
    EXPECT_EQ(rho.convention(), TraceConvention::Metric);
    EXPECT_TRUE(check_trace_condition(rho, a).pass);
}

TEST(EnsembleToDensity, RandomEnsemblesHermitianPsdAndMetricTraceOne) {
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t dim = 2 + static_cast<std::size_t>(trial % 3);
        const auto a = validate_metric(random_positive_definite(dim, rng));
        const auto e = random_metric_ensemble(a, rng, 1 + static_cast<std::size_t>(trial % 5));
        const auto rho = ensemble_to_density(e);
        EXPECT_LE(rho.matrix().hermiticity_deviation(), 1e-12);
        EXPECT_GE(hermitian_eigen(rho.matrix()).eigenvalues.front(), -1e-10);
        const auto check = check_trace_condition(rho, a);
        EXPECT_TRUE(check.pass) << check.value;
    }
}

TEST(TraceCondition, ExampleDensities) {
    for (double lambda : {0.5, 2.0, 10.0}) {
        const auto a = diagonal_metric({1.0, lambda});
        const auto rho1 = DensityOperator::metric(ComplexMatrix::identity(2) * cplx(1.0 / (1.0 + lambda)), a);
        const auto rho2 = DensityOperator::metric(ComplexMatrix::diag({0.5, 1.0 / (2.0 * lambda)}), a);
        EXPECT_NEAR(check_trace_condition(rho1, a).value, 1.0, 1e-15);
        EXPECT_NEAR(check_trace_condition(rho2, a).value, 1.0, 1e-15);
        EXPECT_TRUE(check_trace_condition(rho1, a).pass);
    }
    const auto id = validate_metric(ComplexMatrix::identity(2));
    EXPECT_DOUBLE_EQ(check_trace_condition(DensityOperator::standard(ComplexMatrix::identity(2) * cplx(0.5)), id).value,
                     1.0);
}

TEST(TraceCondition, ViolationsDetected) {
    const auto a = diagonal_metric({1.0, 2.0});
    EXPECT_THROW(DensityOperator::metric(ComplexMatrix::identity(2) * cplx(0.5), a), TraceConditionViolated);
    const auto rho = DensityOperator::standard(ComplexMatrix::identity(2) * cplx(0.5));
    const auto check = check_trace_condition(rho, a);
    EXPECT_DOUBLE_EQ(check.value, 1.5);
    EXPECT_FALSE(check.pass);
    EXPECT_THROW(check_trace_condition(rho, validate_metric(ComplexMatrix::identity(3))), DimensionMismatch);
}

TEST(DensityOperator, RejectsNonPhysical) {
    EXPECT_THROW(DensityOperator::standard(ComplexMatrix::diag({1.5, -0.5})), NotPositive);
    EXPECT_THROW(DensityOperator::standard(ComplexMatrix{{0.5, 0.1}, {0.0, 0.5}}), NotHermitian);
}

TEST(Projector, Invariants) {
    EXPECT_NO_THROW(MeasurementProjector::computational(2, 0));
    EXPECT_THROW(MeasurementProjector(ComplexMatrix::diag({2.0, 0.0}), "2|0><0|"), std::invalid_argument);
    EXPECT_THROW(MeasurementProjector(ComplexMatrix{{1.0, 1.0}, {0.0, 0.0}}, "bad"), NotHermitian);
}

TEST(ProbabilityWeighted, ExampleCases) {
    for (double lambda : {0.5, 2.0, 10.0}) {
        const auto a = diagonal_metric({1.0, lambda});
        const auto m = MeasurementProjector::computational(2, 0);
        const auto rho_z = DensityOperator::metric(ComplexMatrix::identity(2) * cplx(1.0 / (1.0 + lambda)), a);
        const auto rho_x = DensityOperator::metric(ComplexMatrix::diag({0.5, 1.0 / (2.0 * lambda)}), a);
        EXPECT_NEAR(probability_weighted(m, rho_z, a).value, 1.0 / (1.0 + lambda), 1e-15);
        EXPECT_NEAR(probability_weighted(m, rho_x, a).value, 0.5, 1e-15);
        EXPECT_EQ(probability_weighted(m, rho_x, a).imaginary, 0.0);
    }
}

TEST(ProbabilityWeighted, IdentityMetricIsBornRule) {
    Rng rng(32);
    const auto id = validate_metric(ComplexMatrix::identity(3));
    for (int trial = 0; trial < 100; ++trial) {
        const auto rho = DensityOperator::standard(random_density(3, rng));
        const auto m = MeasurementProjector::onto(random_vector(3, rng), "random");
        EXPECT_EQ(probability_weighted(m, rho, id).value, probability_standard(m, rho));
    }
}

TEST(ProbabilityWeighted, CompleteProjectorsSumToOne) {
    Rng rng(33);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dim = 2 + static_cast<std::size_t>(trial % 3);
        const auto a = validate_metric(random_positive_definite(dim, rng));
        const auto rho = ensemble_to_density(random_metric_ensemble(a, rng, 3));
        const auto basis = random_unitary(dim, rng);
        double total = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            total += probability_weighted(MeasurementProjector::onto(basis.column(k), "k"), rho, a).value;
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(ProbabilityWeighted, NonCommutingTripleReportsImaginaryPart) {
    const auto a = validate_metric(ComplexMatrix{{2.0, cplx(0.0, 0.5)}, {cplx(0.0, -0.5), 1.0}});
    const auto rho = ensemble_to_density(Ensemble({{1.0, normalize_a(ComplexVector{1.0, 1.0}, a)}}));
    const auto m = MeasurementProjector::computational(2, 0);
    const auto p = probability_weighted(m, rho, a);
    // Oracle: Tr(A M rho) = sum_k A_k0 rho_0k
    const cplx direct = a.matrix()(0, 0) * rho.matrix()(0, 0) + a.matrix()(1, 0) * rho.matrix()(0, 1);
    EXPECT_NEAR(p.value, direct.real(), 1e-15);
    EXPECT_NEAR(p.imaginary, direct.imag(), 1e-15);
    EXPECT_GT(std::abs(p.imaginary), 1e-3);
}

TEST(ProbabilityWeighted, NegativeValuesAreRawNotClamped) {
    const auto a = validate_metric(ComplexMatrix{{1.0, 0.9}, {0.9, 1.0}});
    const auto rho = ensemble_to_density(Ensemble({{1.0, normalize_a(ComplexVector{1.0, -0.3}, a)}}));
    const auto m = MeasurementProjector::computational(2, 1);
    const auto p = probability_weighted(m, rho, a);
    // Oracle: Tr(A M rho) = A_01 rho_10 + A_11 rho_11
    const cplx direct = a.matrix()(0, 1) * rho.matrix()(1, 0) + a.matrix()(1, 1) * rho.matrix()(1, 1);
    EXPECT_NEAR(p.value, direct.real(), 1e-15);
    EXPECT_TRUE(p.negative());
    EXPECT_EQ(p.clamped(), 0.0);
}

TEST(ProbabilityStandard, Examples) {
    const auto m0 = MeasurementProjector::computational(2, 0);
    EXPECT_DOUBLE_EQ(probability_standard(m0, DensityOperator::standard(ComplexMatrix::identity(2) * cplx(0.5))), 0.5);
    Rng rng(34);
    const auto rho = DensityOperator::standard(random_density(2, rng));
    EXPECT_NEAR(probability_standard(MeasurementProjector(ComplexMatrix::identity(2), "I"), rho), 1.0, 1e-15);

    // Bell state with M = |0><0| (x) I: hand expansion gives |Psi_00|^2 + |Psi_01|^2 = 1/2.
    const auto bell = bell_state().vector();
    const auto rho_bell = DensityOperator::standard(ComplexMatrix::outer(bell, bell));
    const MeasurementProjector m(tensor(ComplexMatrix::diag({1.0, 0.0}), ComplexMatrix::identity(2)), "|0><0|xI");
    EXPECT_NEAR(probability_standard(m, rho_bell), std::norm(bell[0]) + std::norm(bell[1]), 1e-15);
    EXPECT_NEAR(probability_standard(m, rho_bell), 0.5, 1e-15);
    EXPECT_THROW(probability_standard(m0, rho_bell), DimensionMismatch);
}

TEST(EnsembleJson, RoundTrip) {
    const auto a = diagonal_metric({1.0, 2.0});
    const auto e = normalize_ensemble_a(standard_ensemble("diagonal"), a);
    const auto j = to_json(e);
    EXPECT_EQ(j["normalization"], "metric");
    EXPECT_EQ(j["members"].size(), 2u);
    const auto back = ensemble_from_json(nlohmann::json::parse(j.dump()), a);
    ASSERT_EQ(back.size(), e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        EXPECT_EQ(back.members()[i].weight, e.members()[i].weight);
        EXPECT_EQ(back.members()[i].state.vector(), e.members()[i].state.vector());
    }
    const auto s = ensemble_from_json(to_json(standard_ensemble("computational")));
    EXPECT_EQ(s.normalization(), Normalization::Standard);
}

TEST(EnsembleJson, Errors) {
    const auto j = to_json(normalize_ensemble_a(standard_ensemble("diagonal"), diagonal_metric({1.0, 2.0})));
    EXPECT_THROW(ensemble_from_json(j), ParseError);
    EXPECT_THROW(ensemble_from_json(nlohmann::json::parse(R"({"normalization": "odd", "members": []})")), ParseError);
}
