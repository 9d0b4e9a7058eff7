#include "metricqm/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "metricqm/dynamics.hpp"
#include "metricqm/json_io.hpp"
#include "metricqm/metric.hpp"
#include "metricqm/protocol.hpp"
#include "metricqm/states.hpp"

namespace metricqm::cli {

using nlohmann::json;

// ------------------------------- Parsing ------------------------------------

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto end = comma == std::string::npos ? text.size() : comma;
        const char* first = text.data() + pos;
        const char* last = text.data() + end;
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (first == last || ec != std::errc() || ptr != last || !std::isfinite(value)) {
            throw ParseError("bad number list '" + text + "'");
        }
        out.push_back(value);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

ComplexMatrix parse_metric_source(const std::string& source) {
    if (source.rfind("diag:", 0) == 0) {
        const auto values = parse_double_list(source.substr(5));
        return ComplexMatrix::diag(values);
    }
    return load_matrix_file(source);
}

namespace {

struct Options {
    std::string metric;
    double lambda = 2.0;
    std::string lambdas;
    std::string unitary = "H";
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    std::string format = "text";
    std::string out_path;
};

class UsageError : public Error {
public:
    using Error::Error;
};

UnitaryGate parse_unitary(const std::string& source) {
    try {
        return UnitaryGate::named(source);
    } catch (const std::invalid_argument&) {
        if (source.rfind("rot:", 0) == 0) throw;
    }
    return UnitaryGate(load_matrix_file(source), source);
}

std::string fmt(double x) { return format_double(x); }

std::string fmt(cplx z) {
    if (z.imag() == 0.0) return fmt(z.real());
    std::string s = fmt(z.real());
    s += z.imag() < 0.0 ? "-" : "+";
    s += fmt(std::abs(z.imag())) + "i";
    return s;
}

std::string fmt(const ComplexVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.dim(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s + ")";
}

std::string fmt(const ComplexMatrix& m) {
    std::string s = "[";
    for (std::size_t r = 0; r < m.dim(); ++r) {
        s += r ? ", [" : "[";
        for (std::size_t c = 0; c < m.dim(); ++c) s += (c ? ", " : "") + fmt(m(r, c));
        s += "]";
    }
    return s + "]";
}

std::string fmt(const Ensemble& e) {
    std::string s = "{";
    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto& m = e.members()[i];
        s += (i ? "; " : "") + fmt(m.weight) + ", " + fmt(m.state.vector());
    }
    return s + "}";
}

// Key/value report rendered as text ("key: value"), csv ("key,value") or json.
class Report {
public:
    void add(const std::string& key, const std::string& text, json value) {
        rows_.emplace_back(key, text);
        json_[key] = std::move(value);
    }
    void add(const std::string& key, double v) { add(key, fmt(v), v); }
    void add(const std::string& key, const std::string& v) { add(key, v, v); }
    void add_json_only(const std::string& key, json value) { json_[key] = std::move(value); }

    void render(const std::string& format, std::ostream& out) const {
        if (format == "json") {
            out << json_.dump(2) << '\n';
            return;
        }
        if (format == "csv") {
            out << "key,value\n";
            for (const auto& [k, v] : rows_) out << k << ",\"" << v << "\"\n";
            return;
        }
        std::size_t width = 0;
        for (const auto& [k, v] : rows_) width = std::max(width, k.size());
        for (const auto& [k, v] : rows_) out << std::left << std::setw(static_cast<int>(width) + 2) << (k + ":") << v << '\n';
    }

private:
    std::vector<std::pair<std::string, std::string>> rows_;
    json json_ = json::object();
};

// Stream for command output: --out file or the caller's stream.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw UsageError("cannot open output file " + path);
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

// ------------------------------- Commands -----------------------------------

int cmd_validate(const Options& opt, std::ostream& out) {
    const auto candidate = parse_metric_source(opt.metric);
    Report report;
    report.add("metric", opt.metric);
    report.add("dimension", std::to_string(candidate.dim()), candidate.dim());
    const double dev = candidate.hermiticity_deviation();
    report.add("hermiticity_deviation", dev);

    if (dev <= tol::hermitian) {
        const auto eig = hermitian_eigen(candidate);
        std::string list;
        for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) list += (i ? " " : "") + fmt(eig.eigenvalues[i]);
        report.add("eigenvalues", list, eig.eigenvalues);
        report.add("min_eigenvalue", eig.eigenvalues.front());
    }

    int code = kOk;
    try {
        const auto a = validate_metric(candidate);
        report.add("verdict", "valid");
        if (const auto c = a.scalar_multiple()) {
            report.add("scalar_metric", *c);
            if (std::abs(*c - 1.0) > 1e-12) report.add("note", "A = c I with c != 1 (non-unit scale)");
        }
    } catch (const NotHermitian& e) {
        report.add("verdict", "NotHermitian");
        report.add("error", e.what());
        code = kFailed;
    } catch (const NotPositiveDefinite& e) {
        report.add("verdict", "NotPositiveDefinite");
        report.add("error", e.what());
        code = kFailed;
    }
    report.render(opt.format, out);
    return code;
}

struct Check {
    std::string quantity;
    std::string computed;
    std::string expected;
    double deviation;
};

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

double ensemble_deviation(const Ensemble& got, const std::vector<std::pair<double, ComplexVector>>& want) {
    if (got.size() != want.size()) return std::numeric_limits<double>::infinity();
    double dev = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        dev = std::max(dev, std::abs(got.members()[i].weight - want[i].first));
        const auto diff = got.members()[i].state.vector() - want[i].second;
        for (const auto& z : diff.entries()) dev = std::max(dev, std::abs(z));
    }
    return dev;
}

int cmd_reproduce(const Options& opt, std::ostream& out) {
    const double lambda = opt.lambda;
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw UsageError("--lambda must be > 0");

    const auto cfg = example_config(lambda);
    const auto& a = cfg.metric;
    const auto outcome = run_protocol(cfg);
    const auto& z = outcome.per_basis[0];
    const auto& x = outcome.per_basis[1];

    const double h = std::sqrt(0.5);
    const std::vector<std::pair<double, ComplexVector>> ez_expected{{0.5, ComplexVector{1.0, 0.0}},
                                                                     {0.5, ComplexVector{0.0, 1.0}}};
    const std::vector<std::pair<double, ComplexVector>> ex_expected{{0.5, ComplexVector{h, h}},
                                                                     {0.5, ComplexVector{h, -h}}};
    const auto rho_z_expected = ComplexMatrix::identity(2) * cplx(1.0 / (1.0 + lambda));
    const auto rho_x_expected = ComplexMatrix::diag({0.5, 1.0 / (2.0 * lambda)});
    const double pz_expected = 1.0 / (1.0 + lambda);
    const double gap_expected = std::abs(1.0 - lambda) / (2.0 * (1.0 + lambda));
    const double defect_expected = std::abs(lambda - 1.0) / (4.0 * lambda);

    const auto tr_z = check_trace_condition(z.final_density, a);
    const auto tr_x = check_trace_condition(x.final_density, a);
    const double defect = convexity_defect(z.alice_ensemble, x.alice_ensemble, cfg.alice_unitary, a);

    std::vector<Check> checks{
        {"E_Z", fmt(z.alice_ensemble), "{0.5, (1, 0); 0.5, (0, 1)}", ensemble_deviation(z.alice_ensemble, ez_expected)},
        {"E_X", fmt(x.alice_ensemble), "{0.5, |+>; 0.5, |->}", ensemble_deviation(x.alice_ensemble, ex_expected)},
        {"rho_Z", fmt(z.final_density.matrix()), fmt(rho_z_expected),
         max_abs_diff(z.final_density.matrix(), rho_z_expected)},
        {"rho_X", fmt(x.final_density.matrix()), fmt(rho_x_expected),
         max_abs_diff(x.final_density.matrix(), rho_x_expected)},
        {"P_Z(0)", fmt(z.probability.value), fmt(pz_expected), std::abs(z.probability.value - pz_expected)},
        {"P_X(0)", fmt(x.probability.value), fmt(0.5), std::abs(x.probability.value - 0.5)},
        {"Tr(A rho_Z)", fmt(tr_z.value), fmt(1.0), std::abs(tr_z.value - 1.0)},
        {"Tr(A rho_X)", fmt(tr_x.value), fmt(1.0), std::abs(tr_x.value - 1.0)},
        {"probability_gap", fmt(outcome.probability_gap), fmt(gap_expected),
         std::abs(outcome.probability_gap - gap_expected)},
        {"signalling_magnitude", fmt(outcome.signalling_magnitude), fmt(gap_expected),
         std::abs(outcome.signalling_magnitude - gap_expected)},
        {"convexity_defect", fmt(defect), fmt(defect_expected), std::abs(defect - defect_expected)},
    };

    bool ok = tr_z.pass && tr_x.pass;
    for (const auto& c : checks) ok = ok && c.deviation <= 1e-10;

    if (opt.format == "json") {
        json rows = json::array();
        for (const auto& c : checks) {
            rows.push_back(json{{"quantity", c.quantity}, {"computed", c.computed}, {"expected", c.expected},
                                {"deviation", c.deviation}});
        }
        json j{{"lambda", lambda},
               {"checks", rows},
               {"trace_condition_pass", tr_z.pass && tr_x.pass},
               {"outcome", to_json(outcome)},
               {"convexity_defect", defect},
               {"pass", ok}};
        out << j.dump(2) << '\n';
    } else if (opt.format == "csv") {
        out << "quantity,computed,expected,deviation\n";
        for (const auto& c : checks) {
            out << c.quantity << ",\"" << c.computed << "\",\"" << c.expected << "\"," << fmt(c.deviation) << '\n';
        }
    } else {
        out << "lambda = " << fmt(lambda) << "   A = diag(1, lambda), U = H, M = |0><0|\n\n";
        std::size_t wq = 8, wc = 8, we = 8;
        for (const auto& c : checks) {
            wq = std::max(wq, c.quantity.size());
            wc = std::max(wc, c.computed.size());
            we = std::max(we, c.expected.size());
        }
        auto row = [&](const std::string& q, const std::string& c, const std::string& e, const std::string& d) {
            out << std::left << std::setw(static_cast<int>(wq) + 2) << q << std::setw(static_cast<int>(wc) + 2) << c
                << std::setw(static_cast<int>(we) + 2) << e << d << '\n';
        };
        row("quantity", "computed", "expected", "abs_deviation");
        for (const auto& c : checks) row(c.quantity, c.computed, c.expected, fmt(c.deviation));
        out << "\ntrace conditions: " << (tr_z.pass && tr_x.pass ? "pass" : "FAIL") << '\n';
        out << "verdict: " << (outcome.signalling ? "signalling" : "no-signalling") << '\n';
        out << "reproduction: " << (ok ? "pass" : "FAIL") << '\n';
    }
    return ok ? kOk : kFailed;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
    if (opt.lambdas.empty()) throw UsageError("--lambdas is required");
    std::vector<double> lambdas;
    try {
        lambdas = parse_double_list(opt.lambdas);
    } catch (const ParseError& e) {
        throw UsageError(e.what());
    }
    for (double l : lambdas)
        if (!(l > 0.0)) throw UsageError("--lambdas: every lambda must be > 0");
    const auto rows = sweep_lambda(lambdas, parse_unitary(opt.unitary), MeasurementProjector::computational(2, 0));
    if (opt.format == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back(json{{"lambda", r.lambda}, {"p_z", r.p_z}, {"p_x", r.p_x}, {"gap", r.gap},
                               {"magnitude", r.magnitude}});
        }
        out << arr.dump(2) << '\n';
    } else {
        write_sweep_csv(rows, out);
    }
    return kOk;
}

int cmd_certify(const Options& opt, std::ostream& out) {
    const auto a = validate_metric(parse_metric_source(opt.metric));
    if (opt.trials == 0) throw UsageError("--trials must be >= 1");
    const auto cert = certify(a, opt.trials, opt.seed);
    if (opt.format == "json") {
        out << to_json(cert).dump(2) << '\n';
    } else {
        Report report;
        report.add("metric", opt.metric);
        report.add("seed", std::to_string(cert.seed), cert.seed);
        report.add("trials_used", std::to_string(cert.trials_used), cert.trials_used);
        report.add("threshold", cert.threshold);
        if (cert.scalar_multiple) {
            report.add("scalar_metric", *cert.scalar_multiple);
            if (std::abs(*cert.scalar_multiple - 1.0) > 1e-12) {
                report.add("note", "A = c I with c != 1 (non-unit scale, no signalling expected)");
            }
        }
        report.add("found", cert.found ? "true" : "false", cert.found);
        if (cert.witness) {
            const auto& w = *cert.witness;
            report.add("witness_trial", std::to_string(w.trial), w.trial);
            report.add("witness_unitary", w.unitary.label() + " " + fmt(w.unitary.matrix()));
            report.add("witness_bases", w.bases[0].name() + " " + fmt(w.bases[0].vectors()[0]) + fmt(w.bases[0].vectors()[1]) +
                                            " vs " + w.bases[1].name() + " " + fmt(w.bases[1].vectors()[0]) +
                                            fmt(w.bases[1].vectors()[1]));
            report.add("witness_projector", fmt(w.projector.matrix()));
            report.add("probability_gap", w.probability_gap);
            report.add("signalling_magnitude", w.signalling_magnitude);
        }
        report.render(opt.format, out);
    }
    return cert.found ? kSignallingFound : kOk;
}

int cmd_nonlinearity(const Options& opt, std::ostream& out) {
    const auto a = validate_metric(parse_metric_source(opt.metric));
    if (a.dim() != 2) throw UsageError("nonlinearity: qubit metric required");
    const auto u = parse_unitary(opt.unitary);
    const auto bell = bell_state();
    const auto ez = steer(bell, QubitBasis::named("computational"));
    const auto ex = steer(bell, QubitBasis::named("diagonal"));
    const auto rho_z = evolve_ensemble(normalize_ensemble_a(ez, a), u, a);
    const auto rho_x = evolve_ensemble(normalize_ensemble_a(ex, a), u, a);
    const double defect = convexity_defect(ez, ex, u, a);

    Report report;
    report.add("metric", opt.metric);
    report.add("unitary", u.label());
    report.add("E_Z", fmt(ez));
    report.add("E_X", fmt(ex));
    report.add("rho_Z", fmt(rho_z.matrix()), to_json(rho_z.matrix()));
    report.add("rho_X", fmt(rho_x.matrix()), to_json(rho_x.matrix()));
    report.add("convexity_defect", defect);
    report.render(opt.format, out);
    return kOk;
}

int cmd_axioms(const Options& opt, std::ostream& out) {
    const auto candidate = parse_metric_source(opt.metric);
    if (opt.trials == 0) throw UsageError("--trials must be >= 1");
    const auto r = verify_axioms(candidate, opt.trials, opt.seed);
    Report report;
    report.add("metric", opt.metric);
    report.add("samples_used", std::to_string(r.samples_used), r.samples_used);
    report.add("seed", std::to_string(r.seed), r.seed);
    report.add("conjugate_symmetry_max_violation", r.conjugate_symmetry_max_violation);
    report.add("linearity_max_violation", r.linearity_max_violation);
    report.add("positive_definiteness_min_value", r.positive_definiteness_min_value);
    report.add("verdict", r.pass ? "pass" : "fail");
    report.render(opt.format, out);
    return r.pass ? kOk : kFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulator for metric-deformed inner products <phi|A|psi> and the signalling they enable"};
    app.require_subcommand(1, 1);
    Options opt;

    const std::vector<std::string> formats{"text", "csv", "json"};
    std::vector<CLI::Option*> seed_opts;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember(formats));
        sub->add_option("--out", opt.out_path, "Write output to this path instead of stdout");
    };
    auto metric_opt = [&](CLI::App* sub) {
        sub->add_option("--metric", opt.metric, "diag:a,b,... or path to matrix JSON")->required();
    };
    auto seeded = [&](CLI::App* sub, const char* trials_help) {
        sub->add_option("--trials", opt.trials, trials_help);
        seed_opts.push_back(sub->add_option("--seed", opt.seed, "RNG seed (default: $METRICQM_SEED or 0)"));
    };

    auto* validate = app.add_subcommand("validate", "Check that a matrix is a valid metric A > 0");
    metric_opt(validate);
    common(validate);

    auto* reproduce = app.add_subcommand("reproduce-paper", "Reproduce the Bell-state example for one lambda");
    reproduce->add_option("--lambda", opt.lambda, "A = diag(1, lambda)");
    common(reproduce);

    auto* sweep = app.add_subcommand("sweep", "Protocol statistics over a list of lambdas");
    sweep->add_option("--lambdas", opt.lambdas, "Comma-separated lambdas")->required();
    sweep->add_option("--unitary", opt.unitary, "Alice's unitary: H, X, Z, I, rot:z:<t>, rot:y:<t> or JSON path");
    common(sweep);

    auto* cert = app.add_subcommand("certify", "Search for a signalling witness");
    metric_opt(cert);
    seeded(cert, "Trial budget, deterministic candidates included (default 1000)");
    common(cert);

    auto* nonlin = app.add_subcommand("nonlinearity", "Convexity defect of E_Z vs E_X under the renormalized map");
    metric_opt(nonlin);
    nonlin->add_option("--unitary", opt.unitary, "Alice's unitary");
    common(nonlin);

    auto* axioms = app.add_subcommand("axioms", "Sample the inner-product axioms");
    metric_opt(axioms);
    seeded(axioms, "Number of random samples (default 1000)");
    common(axioms);

    std::vector<std::string> argv_store{"metricqm"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    bool seed_given = false;
    for (auto* o : seed_opts) seed_given = seed_given || o->count() > 0;
    if (!seed_given) {
        if (const char* env = std::getenv("METRICQM_SEED")) {
            const std::string s(env);
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), opt.seed);
            if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
                err << "METRICQM_SEED must be a non-negative integer\n";
                return kUsage;
            }
        }
    }

    try {
        Output output(opt.out_path, out);
        auto& os = output.get();
        if (validate->parsed()) return cmd_validate(opt, os);
        if (reproduce->parsed()) return cmd_reproduce(opt, os);
        if (sweep->parsed()) return cmd_sweep(opt, os);
        if (cert->parsed()) return cmd_certify(opt, os);
        if (nonlin->parsed()) return cmd_nonlinearity(opt, os);
        if (axioms->parsed()) return cmd_axioms(opt, os);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kFailed;
    }
    return kUsage;
}

}  // namespace metricqm::cli
