#include "metricqm/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "metricqm/json_io.hpp"
#include "metricqm/log.hpp"
#include "metricqm/random.hpp"

namespace metricqm {

using nlohmann::json;

// ------------------------------- Bases --------------------------------------

QubitBasis::QubitBasis(std::string name, ComplexVector first, ComplexVector second)
    : name_(std::move(name)), vectors_{std::move(first), std::move(second)} {
    for (const auto& v : vectors_) {
        if (v.dim() != 2) throw DimensionMismatch("QubitBasis '" + name_ + "': vectors must be 2-dimensional");
        if (std::abs(vdot(v, v).real() - 1.0) > tol::state_norm) {
            throw NormalizationMismatch("QubitBasis '" + name_ + "': vectors must be unit");
        }
    }
    if (std::abs(vdot(vectors_[0], vectors_[1])) > 1e-12) {
        throw std::invalid_argument("QubitBasis '" + name_ + "': vectors must be orthogonal");
    }
}

QubitBasis QubitBasis::named(const std::string& name) {
    const auto states = basis_states(name, 2);
    return QubitBasis(name, states[0].vector(), states[1].vector());
}

QubitBasis QubitBasis::from_unitary(const ComplexMatrix& u, std::string name) {
    if (u.dim() != 2) throw DimensionMismatch("QubitBasis::from_unitary: 2x2 unitary required");
    return QubitBasis(std::move(name), u.column(0), u.column(1));
}

// ------------------------------- Steering -----------------------------------

Ensemble steer(const PureState& shared, const QubitBasis& basis) {
    if (shared.dim() != 4) throw DimensionMismatch("steer: shared state must be a two-qubit (4-dim) state");
    const auto& psi = shared.vector();

    std::vector<std::pair<double, ComplexVector>> branches;
    double total = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
        const auto& b = basis.vectors()[k];
        // (I (x) <b|) |Psi>
        ComplexVector alice(2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) alice[i] += std::conj(b[j]) * psi[i * 2 + j];
        const double p = vdot(alice, alice).real();
        if (p <= tol::zero_branch) {
            log::info("steer: dropping zero-probability branch " + std::to_string(k) + " of basis '" +
                      basis.name() + "'");
            continue;
        }
        total += p;
        branches.emplace_back(p, alice * cplx(1.0 / std::sqrt(p)));
    }
    std::vector<EnsembleMember> members;
    for (auto& [p, v] : branches) members.push_back({p / total, PureState::standard(std::move(v))});
    return Ensemble(std::move(members));
}

// ------------------------------- Protocol -----------------------------------

ProtocolConfig::ProtocolConfig(MetricOperator metric_, UnitaryGate alice_unitary_, std::vector<QubitBasis> bob_bases_,
                               MeasurementProjector alice_projector_, PureState shared_state_)
    : metric(std::move(metric_)), alice_unitary(std::move(alice_unitary_)), bob_bases(std::move(bob_bases_)),
      alice_projector(std::move(alice_projector_)), shared_state(std::move(shared_state_)) {
    if (shared_state.dim() != 4) throw DimensionMismatch("ProtocolConfig: shared state must be 4-dimensional");
    if (metric.dim() != 2 || alice_unitary.dim() != 2 || alice_projector.dim() != 2) {
        throw DimensionMismatch("ProtocolConfig: metric, unitary and projector act on Alice's qubit (dim 2)");
    }
    if (bob_bases.empty()) throw std::invalid_argument("ProtocolConfig: at least one Bob basis required");
}

ProtocolConfig example_config(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be > 0");
    return ProtocolConfig(validate_metric(ComplexMatrix::diag({1.0, lambda})), UnitaryGate::hadamard(),
                          {QubitBasis::named("computational"), QubitBasis::named("diagonal")},
                          MeasurementProjector::computational(2, 0));
}

double signalling_magnitude(const DensityOperator& rho1, const DensityOperator& rho2, const MetricOperator& a) {
    for (const auto* rho : {&rho1, &rho2}) {
        const auto check = check_trace_condition(*rho, a);
        if (!check.pass) {
            throw TraceConditionViolated("signalling_magnitude: Tr(A rho) = " + format_double(check.value));
        }
    }
    const auto& s = a.sqrt();
    auto effective = [&](const ComplexMatrix& rho) {
        auto m = s * rho * s;
        return 0.5 * (m + dagger(m));
    };
    return trace_distance(effective(rho1.matrix()), effective(rho2.matrix()));
}

ProtocolOutcome run_protocol(const ProtocolConfig& cfg) {
    ProtocolOutcome out;
    const auto& a = cfg.metric;
    for (const auto& basis : cfg.bob_bases) {
        auto ensemble = steer(cfg.shared_state, basis);
        auto rho = evolve_ensemble(normalize_ensemble_a(ensemble, a), cfg.alice_unitary, a);
        const auto p = probability_weighted(cfg.alice_projector, rho, a);
        if (p.negative()) log::warn("run_protocol: negative probability " + format_double(p.value));
        out.per_basis.push_back({basis.name(), std::move(ensemble), std::move(rho), p});
    }

    double lo = out.per_basis.front().probability.value;
    double hi = lo;
    for (const auto& r : out.per_basis) {
        lo = std::min(lo, r.probability.value);
        hi = std::max(hi, r.probability.value);
    }
    out.probability_gap = hi - lo;

    for (std::size_t i = 0; i < out.per_basis.size(); ++i)
        for (std::size_t j = i + 1; j < out.per_basis.size(); ++j) {
            const auto& ri = out.per_basis[i].final_density;
            const auto& rj = out.per_basis[j].final_density;
            out.signalling_magnitude = std::max(out.signalling_magnitude, signalling_magnitude(ri, rj, a));
            out.frobenius_gap = std::max(out.frobenius_gap, frobenius_distance(ri.matrix(), rj.matrix()));
        }
    out.signalling = out.signalling_magnitude > tol::signalling_verdict;
    return out;
}

MeasurementProjector best_distinguishing_projector(const ComplexMatrix& rho1, const ComplexMatrix& rho2,
                                                   const MetricOperator& a) {
    // Re Tr(A |m><m| D) = <m| (A D + D A) / 2 |m>
    const auto d = rho1 - rho2;
    auto k = 0.5 * (a.matrix() * d + d * a.matrix());
    k = 0.5 * (k + dagger(k));
    const auto eig = hermitian_eigen(k);
    const std::size_t top =
        std::abs(eig.eigenvalues.back()) >= std::abs(eig.eigenvalues.front()) ? eig.eigenvalues.size() - 1 : 0;
    return MeasurementProjector::onto(eig.eigenvectors.column(top), "optimal");
}

// ------------------------------- Certifier ----------------------------------

namespace {

struct Candidate {
    UnitaryGate unitary;
    std::array<QubitBasis, 2> bases;
    std::optional<MeasurementProjector> projector;  // nullopt: choose the optimal one
};

// Bob basis whose outcomes steer the Bell state onto the columns of `alice`.
QubitBasis bob_basis_steering_to(const ComplexMatrix& alice, std::string name) {
    const auto c0 = alice.column(0), c1 = alice.column(1);
    return QubitBasis(std::move(name), conj(c0), conj(c1));
}

Candidate deterministic_candidate(std::size_t trial, const MetricOperator& a) {
    if (trial == 1) {
        return {UnitaryGate::hadamard(), {QubitBasis::named("computational"), QubitBasis::named("diagonal")},
                MeasurementProjector::computational(2, 0)};
    }
    const auto& v = a.eigenvectors();
    const auto h = UnitaryGate::hadamard().matrix();
    const auto u = v * h * dagger(v);
    return {UnitaryGate(u, "eigenbasis-hadamard"),
            {bob_basis_steering_to(v, "eigenbasis"), bob_basis_steering_to(v * h, "eigenbasis-rotated")},
            std::nullopt};
}

Candidate random_candidate(Rng& rng) {
    auto u = random_unitary(2, rng);
    auto b1 = random_unitary(2, rng);
    auto b2 = random_unitary(2, rng);
    return {UnitaryGate(std::move(u), "haar"),
            {QubitBasis::from_unitary(b1, "random-a"), QubitBasis::from_unitary(b2, "random-b")},
            std::nullopt};
}

}  // namespace

SignallingCertificate certify(const MetricOperator& a, std::size_t trials, std::uint64_t seed, double threshold) {
    if (trials == 0) throw std::invalid_argument("certify: trials must be >= 1");
    if (a.dim() != 2) throw DimensionMismatch("certify: qubit metric required");

    SignallingCertificate cert{a, false, std::nullopt, 0, seed, threshold, a.scalar_multiple()};
    Rng rng(seed);
    for (std::size_t trial = 1; trial <= trials; ++trial) {
        auto cand = trial <= 2 ? deterministic_candidate(trial, a) : random_candidate(rng);
        cert.trials_used = trial;

        auto projector = cand.projector;
        if (!projector) {
            ProtocolConfig probe(a, cand.unitary, {cand.bases[0], cand.bases[1]},
                                 MeasurementProjector::computational(2, 0));
            const auto first = run_protocol(probe);
            projector = best_distinguishing_projector(first.per_basis[0].final_density.matrix(),
                                                      first.per_basis[1].final_density.matrix(), a);
        }
        ProtocolConfig cfg(a, cand.unitary, {cand.bases[0], cand.bases[1]}, *projector);
        const auto outcome = run_protocol(cfg);
        if (outcome.probability_gap > threshold || outcome.signalling_magnitude > threshold) {
            cert.found = true;
            cert.witness = SignallingWitness{std::move(cand.unitary), std::move(cand.bases), std::move(*projector),
                                             outcome.probability_gap, outcome.signalling_magnitude, trial};
            return cert;
        }
    }
    return cert;
}

ProtocolOutcome replay_witness(const MetricOperator& a, const SignallingWitness& w) {
    return run_protocol(ProtocolConfig(a, w.unitary, {w.bases[0], w.bases[1]}, w.projector));
}

// ------------------------------- Sweep --------------------------------------

std::vector<SweepRow> sweep_lambda(const std::vector<double>& lambdas, const UnitaryGate& u,
                                   const MeasurementProjector& m) {
    for (double lambda : lambdas) {
        if (!(lambda > 0.0) || !std::isfinite(lambda)) {
            throw std::invalid_argument("sweep_lambda: lambda must be > 0, got " + format_double(lambda));
        }
    }
    std::vector<SweepRow> rows;
    rows.reserve(lambdas.size());
    for (double lambda : lambdas) {
        ProtocolConfig cfg(validate_metric(ComplexMatrix::diag({1.0, lambda})), u,
                           {QubitBasis::named("computational"), QubitBasis::named("diagonal")}, m);
        const auto out = run_protocol(cfg);
        const double pz = out.per_basis[0].probability.value;
        const double px = out.per_basis[1].probability.value;
        rows.push_back({lambda, pz, px, std::abs(pz - px), out.signalling_magnitude});
    }
    return rows;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "lambda,p_z,p_x,gap,magnitude\n";
    for (const auto& r : rows) {
        out << format_double(r.lambda) << ',' << format_double(r.p_z) << ',' << format_double(r.p_x) << ','
            << format_double(r.gap) << ',' << format_double(r.magnitude) << '\n';
    }
}

// ------------------------------- JSON ---------------------------------------

json to_json(const QubitBasis& b) {
    return json{{"name", b.name()}, {"vectors", json::array({to_json(b.vectors()[0]), to_json(b.vectors()[1])})}};
}

json to_json(const SignallingCertificate& c) {
    json j{{"metric", to_json(c.metric.matrix())},
           {"found", c.found},
           {"trials_used", c.trials_used},
           {"seed", c.seed},
           {"threshold", c.threshold}};
    if (c.scalar_multiple) {
        j["scalar_metric"] = *c.scalar_multiple;
        j["scalar_metric_non_unit"] = std::abs(*c.scalar_multiple - 1.0) > 1e-12;
    } else {
        j["scalar_metric"] = nullptr;
    }
    if (c.witness) {
        const auto& w = *c.witness;
        j["witness"] = json{{"unitary", to_json(w.unitary.matrix())},
                            {"unitary_label", w.unitary.label()},
                            {"bases", json::array({to_json(w.bases[0]), to_json(w.bases[1])})},
                            {"projector", to_json(w.projector.matrix())},
                            {"probability_gap", w.probability_gap},
                            {"signalling_magnitude", w.signalling_magnitude},
                            {"trial", w.trial}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

json to_json(const ProtocolOutcome& o) {
    json per = json::array();
    for (const auto& r : o.per_basis) {
        per.push_back(json{{"basis", r.basis},
                           {"alice_ensemble", to_json(r.alice_ensemble)},
                           {"final_density", to_json(r.final_density.matrix())},
                           {"probability", r.probability.value},
                           {"probability_imaginary", r.probability.imaginary}});
    }
    return json{{"per_basis", per},
                {"signalling_magnitude", o.signalling_magnitude},
                {"probability_gap", o.probability_gap},
                {"frobenius_gap", o.frobenius_gap},
                {"verdict", o.signalling ? "signalling" : "no-signalling"}};
}

}  // namespace metricqm
