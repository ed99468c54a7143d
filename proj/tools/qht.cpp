// Copyright 2026 The qht Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qht: evaluate optimal two-hypothesis quantum tests, compare joint against
// sequential strategies on state pairs, and run randomized audits, brute-force
// oracles, and Monte Carlo simulations over the same instances.
//
// Exit codes: 0 success, 1 bad input, 2 audit found a violation, 3 internal
// numeric inconsistency.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qht/audit.hpp"
#include "qht/discrimination.hpp"
#include "qht/entangled.hpp"
#include "qht/errors.hpp"
#include "qht/oracle.hpp"
#include "qht/replicas.hpp"
#include "qht/serialize.hpp"

namespace {

using qht::cplx;
using qht::json;
using qht::validation_error;

struct GlobalOptions {
    std::uint64_t seed = 42;
    double tol_gap = 1e-9;
    double tol_param = 1e-6;
    std::string format;  // empty = default (json; scans default to csv)
    std::string output;  // empty = stdout
};

void write_text(const GlobalOptions &g, const std::string &text) {
    if (g.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(g.output);
    if (!out) {
        throw validation_error("output: cannot open " + g.output);
    }
    out << text;
}

std::string effective_format(const GlobalOptions &g, bool is_scan) {
    if (g.format.empty()) {
        return is_scan ? "csv" : "json";
    }
    if (g.format == "csv" && !is_scan) {
        throw validation_error("format: csv output is only available for scan");
    }
    return g.format;
}

void write_json(const GlobalOptions &g, const json &j) {
    effective_format(g, false);  // every JSON-shaped report rejects --format csv
    write_text(g, j.dump(2) + "\n");
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

cplx to_complex(const std::vector<double> &v) {
    return v.size() == 2 ? cplx(v[0], v[1]) : cplx(v.empty() ? 0.0 : v[0], 0.0);
}

// Parameter flags shared by the instance-taking subcommands. Each complex flag
// accepts one value (purely real) or two (re im).
struct ParamFlags {
    std::string instance_path;
    std::vector<double> x1, x2, z;
    double prior1 = 0.5;
    std::vector<double> alpha1, beta1, gamma1;
    std::vector<double> alpha2, beta2, gamma2;
    std::string mode = "canonicalize";
};

CLI::Option *add_instance_flag(CLI::App *cmd, ParamFlags &f) {
    return cmd->add_option("--instance", f.instance_path,
                           "JSON instance file (alternative to parameter flags)")
        ->check(CLI::ExistingFile);
}

void add_pair_param_flags(CLI::App *cmd, ParamFlags &f, CLI::Option *inst) {
    inst->excludes(cmd->add_option("--x1", f.x1, "population <0|rho1|0> of the first state")
                       ->expected(1));
    inst->excludes(cmd->add_option("--x2", f.x2, "population <0|rho2|0> of the second state")
                       ->expected(1));
    inst->excludes(cmd->add_option("--z", f.z, "shared off-diagonal element, re [im]")
                       ->expected(1, 2));
}

void add_amplitude_flags(CLI::App *cmd, ParamFlags &f, CLI::Option *inst) {
    const auto add = [&](const char *name, std::vector<double> &slot, const char *help) {
        inst->excludes(cmd->add_option(name, slot, help)->expected(1, 2));
    };
    add("--alpha1", f.alpha1, "amplitude of |00> in state 1, re [im]");
    add("--beta1", f.beta1, "amplitude of the symmetric |01>+|10> component in state 1");
    add("--gamma1", f.gamma1, "amplitude of |11> in state 1");
    add("--alpha2", f.alpha2, "amplitude of |00> in state 2");
    add("--beta2", f.beta2, "amplitude of the symmetric component in state 2");
    add("--gamma2", f.gamma2, "amplitude of |11> in state 2");
}

double require_value(const std::vector<double> &v, const char *name) {
    if (v.empty()) {
        throw validation_error(std::string(name) + ": missing (pass the flag or use --instance)");
    }
    return v[0];
}

std::vector<double> require_pairlike(const std::vector<double> &v, const char *name) {
    if (v.empty()) {
        throw validation_error(std::string(name) + ": missing (pass the flag or use --instance)");
    }
    return v;
}

qht::InstanceSpec load_instance_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw validation_error("instance: cannot open " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error &e) {
        throw validation_error(std::string("instance: ") + e.what());
    }
    return qht::parse_instance_spec(j);
}

qht::InstanceSpec resolve_instance(const ParamFlags &f, const std::string &kind) {
    if (!f.instance_path.empty()) {
        qht::InstanceSpec spec = load_instance_file(f.instance_path);
        const bool pair_like = kind == "single" || kind == "independent";
        const bool spec_pair_like = spec.kind == "single" || spec.kind == "independent";
        if (pair_like != spec_pair_like || (!pair_like && spec.kind != kind)) {
            throw validation_error("kind: instance file holds \"" + spec.kind +
                                   "\" but this command expects \"" + kind + "\"");
        }
        spec.kind = kind;  // single<->independent reuse the same parameter block
        if (kind == "independent" && spec.prior1 != 0.5) {
            throw validation_error("priors: replica-pair problems assume equal priors");
        }
        return spec;
    }
    qht::InstanceSpec spec;
    spec.kind = kind;
    if (kind == "single" || kind == "independent") {
        spec.x1 = require_value(f.x1, "x1");
        spec.x2 = require_value(f.x2, "x2");
        spec.z = to_complex(f.z);
        spec.prior1 = kind == "single" ? f.prior1 : 0.5;
    } else {
        spec.alpha1 = to_complex(require_pairlike(f.alpha1, "alpha1"));
        spec.beta1 = to_complex(require_pairlike(f.beta1, "beta1"));
        spec.gamma1 = to_complex(require_pairlike(f.gamma1, "gamma1"));
        spec.alpha2 = to_complex(require_pairlike(f.alpha2, "alpha2"));
        spec.beta2 = to_complex(require_pairlike(f.beta2, "beta2"));
        spec.gamma2 = to_complex(require_pairlike(f.gamma2, "gamma2"));
        spec.mode = f.mode;
    }
    return spec;
}

// ---- single ---------------------------------------------------------------

int cmd_single(const GlobalOptions &g, const ParamFlags &f) {
    const qht::InstanceSpec spec = resolve_instance(f, "single");
    const qht::Hypotheses<2> h = qht::make_single_hypotheses(spec);
    const qht::TwoOutcomeMeasurement<2> m = qht::helstrom_measurement(h);
    const double error = qht::helstrom_error(h);
    const qht::OutcomeDistribution dist = qht::outcome_probabilities(h, m);

    // A test that can never report one of the outcomes ignores the data;
    // this happens exactly when one weighted state dominates the other.
    const bool trivial = m.pi1().mat().max_abs() <= 1e-12 || m.pi2().mat().max_abs() <= 1e-12;
    if (trivial) {
        std::cerr << "warning: the optimal test always reports the same outcome; "
                     "the hypotheses are not both favored anywhere\n";
    }

    json report{{"instance", spec}, {"error", error}, {"trivial_case", trivial}};
    report["measurement"] = json{{"pi1", m.pi1()}, {"pi2", m.pi2()}};
    report["outcomes"] = dist;
    for (int s = 1; s <= 2; ++s) {
        const bool defined = dist.marginal(s) > 0.0;
        const std::array<double, 2> post =
            defined ? qht::bayes_posterior(h, dist, s) : std::array<double, 2>{0.5, 0.5};
        const std::string key = "posterior_given_" + std::to_string(s);
        report[key] = {post[0], post[1]};
        report[key + "_defined"] = defined;
    }
    write_json(g, report);
    return 0;
}

// ---- pair -------------------------------------------------------------------

int cmd_pair(const GlobalOptions &g, const ParamFlags &f) {
    const qht::InstanceSpec spec = resolve_instance(f, "independent");
    const qht::IndependentPairProblem p = qht::make_pair_problem(spec);
    const qht::ComparisonReport cmp = qht::compare_independent(p, g.tol_gap, g.tol_param);
    const qht::SequentialStageReport seq = qht::sequential_pair_protocol(p);

    json report{{"instance", spec}, {"comparison", cmp}, {"sequential", seq}};
    write_json(g, report);
    return 0;
}

// ---- entangled --------------------------------------------------------------

int cmd_entangled(const GlobalOptions &g, const ParamFlags &f) {
    const qht::InstanceSpec spec = resolve_instance(f, "entangled");
    const qht::CanonicalizedEntangled ce = qht::make_entangled_problem(spec);
    const qht::EntangledProblem &e = ce.problem;

    json report{{"instance", spec}};
    report["canonical"] = json{{"state1", e.psi1()},
                               {"state2", e.psi2()},
                               {"basis", qht::matrix_to_json(ce.basis)},
                               {"degenerate_reduced", ce.degenerate_reduced}};
    report["x1"] = e.x1();
    report["x2"] = e.x2();
    report["overlap"] = qht::complex_to_json(e.overlap());
    report["p_global"] = qht::global_error_entangled(e);
    report["p_sequential"] = qht::sequential_error_entangled_closed(e);
    report["sequential"] = qht::sequential_error_entangled_protocol(e);
    report["gap"] = qht::gap_diagnostics(e);
    report["equality"] = qht::equality_conditions(e, g.tol_param);
    write_json(g, report);
    return 0;
}

// ---- scan ---------------------------------------------------------------------

struct SweepRange {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    std::uint64_t count = 1;

    double value_at(std::uint64_t k) const {
        if (count == 1) {
            return start;
        }
        if (k + 1 == count) {
            return stop;  // land exactly on the endpoint
        }
        return start + static_cast<double>(k) * (stop - start) / static_cast<double>(count - 1);
    }
};

SweepRange parse_sweep(const std::string &text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
        throw validation_error("sweep: expected name=start:stop:count, got \"" + text + "\"");
    }
    SweepRange r;
    r.name = text.substr(0, eq);
    if (r.name != "x1" && r.name != "x2" && r.name != "z_re" && r.name != "z_im") {
        throw validation_error("sweep: unknown parameter \"" + r.name +
                               "\" (expected x1, x2, z_re, or z_im)");
    }
    const std::string range = text.substr(eq + 1);
    const auto c1 = range.find(':');
    const auto c2 = range.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw validation_error("sweep: expected name=start:stop:count, got \"" + text + "\"");
    }
    try {
        std::size_t used = 0;
        const std::string s0 = range.substr(0, c1);
        const std::string s1 = range.substr(c1 + 1, c2 - c1 - 1);
        const std::string s2 = range.substr(c2 + 1);
        r.start = std::stod(s0, &used);
        if (used != s0.size()) throw std::invalid_argument(s0);
        r.stop = std::stod(s1, &used);
        if (used != s1.size()) throw std::invalid_argument(s1);
        const long long n = std::stoll(s2, &used);
        if (used != s2.size() || n < 1) throw std::invalid_argument(s2);
        r.count = static_cast<std::uint64_t>(n);
    } catch (const std::exception &) {
        throw validation_error("sweep: malformed range in \"" + text + "\"");
    }
    if (!std::isfinite(r.start) || !std::isfinite(r.stop)) {
        throw validation_error("sweep: range endpoints must be finite");
    }
    return r;
}

struct ScanRow {
    std::uint64_t index = 0;
    double x1 = 0.0, x2 = 0.0, z_re = 0.0, z_im = 0.0;
    double p_global = 0.0, p_sequential = 0.0, gap = 0.0;
    std::string equality_class;
    std::string status;  // "ok" or "invalid"
};

int cmd_scan(const GlobalOptions &g, const ParamFlags &f, const std::vector<std::string> &sweep_args) {
    if (sweep_args.empty()) {
        throw validation_error("sweep: at least one --sweep range is required");
    }
    std::vector<SweepRange> sweeps;
    for (const std::string &text : sweep_args) {
        SweepRange r = parse_sweep(text);
        for (const SweepRange &prev : sweeps) {
            if (prev.name == r.name) {
                throw validation_error("sweep: parameter \"" + r.name + "\" swept twice");
            }
        }
        sweeps.push_back(r);
    }
    const auto swept = [&](const char *name) {
        for (const SweepRange &r : sweeps) {
            if (r.name == name) return true;
        }
        return false;
    };
    if (!f.x1.empty() && swept("x1")) throw validation_error("sweep: x1 is both fixed and swept");
    if (!f.x2.empty() && swept("x2")) throw validation_error("sweep: x2 is both fixed and swept");
    if (!f.z.empty() && (swept("z_re") || swept("z_im"))) {
        throw validation_error("sweep: z is both fixed and swept");
    }

    double base_x1 = 0.0, base_x2 = 0.0;
    if (!swept("x1")) base_x1 = require_value(f.x1, "x1");
    if (!swept("x2")) base_x2 = require_value(f.x2, "x2");
    const cplx base_z = to_complex(f.z);

    std::uint64_t total = 1;
    for (const SweepRange &r : sweeps) {
        if (r.count > 100000000ULL / total) {
            throw validation_error("sweep: grid has more than 1e8 points");
        }
        total *= r.count;
    }

    std::vector<ScanRow> rows;
    rows.reserve(total);
    for (std::uint64_t index = 0; index < total; ++index) {
        ScanRow row;
        row.index = index;
        row.x1 = base_x1;
        row.x2 = base_x2;
        row.z_re = base_z.real();
        row.z_im = base_z.imag();
        // Row-major over the sweeps in the order given; the last varies fastest.
        std::uint64_t rem = index;
        for (std::size_t d = sweeps.size(); d-- > 0;) {
            const SweepRange &r = sweeps[d];
            const double v = r.value_at(rem % r.count);
            rem /= r.count;
            if (r.name == "x1") row.x1 = v;
            else if (r.name == "x2") row.x2 = v;
            else if (r.name == "z_re") row.z_re = v;
            else row.z_im = v;
        }
        try {
            const qht::IndependentPairProblem p(row.x1, row.x2, cplx(row.z_re, row.z_im));
            const qht::ComparisonReport cmp = qht::compare_independent(p, g.tol_gap, g.tol_param);
            row.p_global = cmp.p_global;
            row.p_sequential = cmp.p_sequential;
            row.gap = cmp.gap;
            row.equality_class = qht::equality_class_name(cmp.equality_class);
            row.status = "ok";
        } catch (const validation_error &) {
            const double nan = std::nan("");
            row.p_global = row.p_sequential = row.gap = nan;
            row.equality_class = "";
            row.status = "invalid";
        }
        rows.push_back(std::move(row));
    }

    if (effective_format(g, true) == "csv") {
        std::string text = "index,x1,x2,z_re,z_im,p_global,p_sequential,gap,equality_class,status\n";
        for (const ScanRow &r : rows) {
            text += std::to_string(r.index) + ',' + fmt17(r.x1) + ',' + fmt17(r.x2) + ',' +
                    fmt17(r.z_re) + ',' + fmt17(r.z_im) + ',' + fmt17(r.p_global) + ',' +
                    fmt17(r.p_sequential) + ',' + fmt17(r.gap) + ',' + r.equality_class + ',' +
                    r.status + '\n';
        }
        write_text(g, text);
    } else {
        json jsweeps = json::array();
        for (const SweepRange &r : sweeps) {
            jsweeps.push_back(
                {{"name", r.name}, {"start", r.start}, {"stop", r.stop}, {"count", r.count}});
        }
        json jrows = json::array();
        for (const ScanRow &r : rows) {
            jrows.push_back({{"index", r.index},
                             {"x1", r.x1},
                             {"x2", r.x2},
                             {"z_re", r.z_re},
                             {"z_im", r.z_im},
                             {"p_global", r.p_global},
                             {"p_sequential", r.p_sequential},
                             {"gap", r.gap},
                             {"equality_class", r.equality_class},
                             {"status", r.status}});
        }
        write_json(g, json{{"sweeps", jsweeps}, {"rows", jrows}});
    }
    return 0;
}

// ---- audit ----------------------------------------------------------------

int cmd_audit(const GlobalOptions &g, const std::string &kind, std::uint64_t count, double margin,
              std::uint64_t product_count, double cross_tol) {
    json report;
    std::uint64_t violations = 0;
    if (kind == "independent") {
        const auto r = qht::audit_independent(count, g.seed, g.tol_gap, g.tol_param, margin);
        report = r;
        violations = r.violations();
    } else if (kind == "entangled") {
        const auto r =
            qht::audit_entangled(count, g.seed, g.tol_gap, g.tol_param, margin, product_count);
        report = r;
        violations = r.violations();
    } else if (kind == "special-cases") {
        const auto r = qht::audit_special_cases(count, g.seed, g.tol_gap);
        report = r;
        violations = r.violations();
    } else {
        const auto r = qht::audit_cross_forms(count, g.seed, cross_tol);
        report = r;
        violations = r.violations();
    }
    write_json(g, report);
    if (violations > 0) {
        std::cerr << "audit: " << violations << " violation(s) found\n";
        return 2;
    }
    return 0;
}

// ---- oracle -----------------------------------------------------------------

int cmd_oracle(const GlobalOptions &g, const ParamFlags &f, const std::string &kind,
               qht::SearchConfig cfg) {
    cfg.seed = g.seed;
    cfg.validate();
    const qht::InstanceSpec spec = resolve_instance(f, kind);

    json report{{"instance", spec}, {"config", cfg}};
    double helstrom = 0.0, searched = 0.0;
    if (kind == "single") {
        const qht::Hypotheses<2> h = qht::make_single_hypotheses(spec);
        helstrom = qht::helstrom_error(h);
        const auto r = qht::brute_force_min_error(h, cfg);
        searched = r.best_error;
        report["best_measurement"] =
            json{{"pi1", r.best_measurement.pi1()}, {"pi2", r.best_measurement.pi2()}};
    } else if (kind == "independent") {
        const qht::IndependentPairProblem p = qht::make_pair_problem(spec);
        const qht::HermitianMatrix<2> r1 = qht::qubit_state_to_operator(p.q1());
        const qht::HermitianMatrix<2> r2 = qht::qubit_state_to_operator(p.q2());
        const qht::Hypotheses<4> h(qht::tensor_product(r1, r1), qht::tensor_product(r2, r2), 0.5);
        helstrom = qht::helstrom_error(h);
        const auto r = qht::brute_force_min_error(h, cfg);
        searched = r.best_error;
        report["best_measurement"] =
            json{{"pi1", r.best_measurement.pi1()}, {"pi2", r.best_measurement.pi2()}};
    } else {
        const qht::CanonicalizedEntangled ce = qht::make_entangled_problem(spec);
        const qht::Hypotheses<4> h(qht::projector(ce.problem.psi1().state()),
                                   qht::projector(ce.problem.psi2().state()), 0.5);
        helstrom = qht::helstrom_error(h);
        const auto r = qht::brute_force_min_error(h, cfg);
        searched = r.best_error;
        report["best_measurement"] =
            json{{"pi1", r.best_measurement.pi1()}, {"pi2", r.best_measurement.pi2()}};
    }
    report["helstrom_error"] = helstrom;
    report["search_error"] = searched;
    report["excess"] = searched - helstrom;
    write_json(g, report);
    return 0;
}

// ---- simulate ---------------------------------------------------------------

int cmd_simulate(const GlobalOptions &g, const ParamFlags &f, const std::string &kind,
                 std::uint64_t trials) {
    const qht::InstanceSpec spec = resolve_instance(f, kind);
    double analytic = 0.0;
    qht::SimulationResult sim;
    if (kind == "independent") {
        const qht::IndependentPairProblem p = qht::make_pair_problem(spec);
        analytic = qht::sequential_pair_error_closed(p);
        sim = qht::simulate_sequential(p, trials, g.seed);
    } else if (kind == "entangled") {
        const qht::CanonicalizedEntangled ce = qht::make_entangled_problem(spec);
        analytic = qht::sequential_error_entangled_closed(ce.problem);
        sim = qht::simulate_sequential(ce.problem, trials, g.seed);
    } else {
        throw validation_error(
            "kind: simulate runs the two-stage protocol; use independent or entangled");
    }
    json report{{"instance", spec},
                {"analytic_error", analytic},
                {"simulation", sim},
                {"deviation_sigma",
                 sim.std_error > 0.0 ? std::abs(sim.empirical_error - analytic) / sim.std_error
                                     : 0.0}};
    write_json(g, report);
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"optimal two-hypothesis quantum tests: joint vs. sequential strategies"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--seed", g.seed, "RNG seed for audits, oracles, and simulations")
        ->capture_default_str();
    app.add_option("--tol-gap", g.tol_gap, "error gap below which strategies count as tied")
        ->capture_default_str();
    app.add_option("--tol-param", g.tol_param, "tolerance on parameter conditions for equality")
        ->capture_default_str();
    app.add_option("--format", g.format, "output format (scans default to csv)")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output", g.output, "write the report to this file instead of stdout");

    ParamFlags fs;
    CLI::App *single = app.add_subcommand("single", "optimal test for one qubit pair of hypotheses");
    {
        CLI::Option *inst = add_instance_flag(single, fs);
        add_pair_param_flags(single, fs, inst);
        inst->excludes(single->add_option("--prior1", fs.prior1, "prior of hypothesis 1")
                           ->capture_default_str());
    }

    ParamFlags fp;
    CLI::App *pair = app.add_subcommand(
        "pair", "joint vs. sequential strategies on two independent copies");
    add_pair_param_flags(pair, fp, add_instance_flag(pair, fp));

    ParamFlags fe;
    CLI::App *entangled = app.add_subcommand(
        "entangled", "joint vs. sequential strategies on symmetric entangled pure states");
    {
        CLI::Option *inst = add_instance_flag(entangled, fe);
        add_amplitude_flags(entangled, fe, inst);
        entangled->add_option("--mode", fe.mode, "reduced-basis handling")
            ->check(CLI::IsMember({"validate", "canonicalize"}))
            ->capture_default_str();
    }

    ParamFlags fscan;
    std::vector<std::string> sweep_args;
    CLI::App *scan = app.add_subcommand("scan", "grid of pair comparisons over swept parameters");
    scan->add_option("--x1", fscan.x1, "fixed x1 (unless swept)")->expected(1);
    scan->add_option("--x2", fscan.x2, "fixed x2 (unless swept)")->expected(1);
    scan->add_option("--z", fscan.z, "fixed z, re [im] (unless swept)")->expected(1, 2);
    scan->add_option("--sweep", sweep_args,
                     "name=start:stop:count with name in {x1, x2, z_re, z_im}; repeatable");

    std::string audit_kind;
    std::uint64_t audit_count = 10000;
    double audit_margin = 1e-2;
    std::uint64_t audit_product_count = 1000;
    double audit_cross_tol = 1e-10;
    CLI::App *audit = app.add_subcommand("audit", "randomized inequality and consistency audits");
    audit->add_option("kind", audit_kind, "independent | entangled | special-cases | cross-forms")
        ->required()
        ->check(CLI::IsMember({"independent", "entangled", "special-cases", "cross-forms"}));
    audit->add_option("--count", audit_count, "instances (per family where applicable)")
        ->capture_default_str();
    audit->add_option("--margin", audit_margin,
                      "distance to an equality manifold below which tiny gaps are ambiguous")
        ->capture_default_str();
    audit->add_option("--product-count", audit_product_count,
                      "product-state subsample size for the entangled audit")
        ->capture_default_str();
    audit->add_option("--tol", audit_cross_tol, "agreement tolerance for the cross-forms audit")
        ->capture_default_str();

    ParamFlags fo;
    std::string oracle_kind = "single";
    qht::SearchConfig oracle_cfg;
    CLI::App *oracle = app.add_subcommand("oracle", "brute-force measurement search vs. the optimum");
    {
        oracle->add_option("--kind", oracle_kind, "single | independent | entangled")
            ->check(CLI::IsMember({"single", "independent", "entangled"}))
            ->capture_default_str();
        CLI::Option *inst = add_instance_flag(oracle, fo);
        add_pair_param_flags(oracle, fo, inst);
        inst->excludes(oracle->add_option("--prior1", fo.prior1, "prior of hypothesis 1 (single only)")
                           ->capture_default_str());
        add_amplitude_flags(oracle, fo, inst);
        oracle->add_option("--grid-density", oracle_cfg.grid_density, "directions searched in dim 2")
            ->capture_default_str();
        oracle->add_option("--random-trials", oracle_cfg.random_trials, "random draws in dim 4")
            ->capture_default_str();
        oracle->add_option("--refine-iterations", oracle_cfg.refine_iterations,
                           "local refinement steps in dim 4")
            ->capture_default_str();
    }

    ParamFlags fsim;
    std::string sim_kind = "independent";
    std::uint64_t sim_trials = 100000;
    CLI::App *simulate = app.add_subcommand("simulate", "Monte Carlo run of the two-stage protocol");
    {
        simulate->add_option("--kind", sim_kind, "independent | entangled")
            ->check(CLI::IsMember({"single", "independent", "entangled"}))
            ->capture_default_str();
        CLI::Option *inst = add_instance_flag(simulate, fsim);
        add_pair_param_flags(simulate, fsim, inst);
        add_amplitude_flags(simulate, fsim, inst);
        simulate->add_option("--trials", sim_trials, "number of protocol runs")
            ->capture_default_str();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(single)) return cmd_single(g, fs);
        if (app.got_subcommand(pair)) return cmd_pair(g, fp);
        if (app.got_subcommand(entangled)) return cmd_entangled(g, fe);
        if (app.got_subcommand(scan)) return cmd_scan(g, fscan, sweep_args);
        if (app.got_subcommand(audit)) {
            return cmd_audit(g, audit_kind, audit_count, audit_margin, audit_product_count,
                             audit_cross_tol);
        }
        if (app.got_subcommand(oracle)) return cmd_oracle(g, fo, oracle_kind, oracle_cfg);
        if (app.got_subcommand(simulate)) return cmd_simulate(g, fsim, sim_kind, sim_trials);
    } catch (const validation_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const qht::numeric_error &e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
