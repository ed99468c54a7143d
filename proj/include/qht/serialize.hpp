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

#pragma once

#include <cstddef>
#include <string>

#include <json.hpp>

#include "qht/audit.hpp"
#include "qht/discrimination.hpp"
#include "qht/entangled.hpp"
#include "qht/errors.hpp"
#include "qht/matrix.hpp"
#include "qht/oracle.hpp"
#include "qht/replicas.hpp"

// JSON views of every report type, plus parsing of instance files. Complex
// numbers always serialize as [re, im]; a likelihood ratio that is infinite
// serializes as 0.0 with its lambda_infinite flag set, keeping every field
// numeric.

namespace qht {

using json = nlohmann::json;

inline json complex_to_json(cplx v) {
    return json::array({v.real(), v.imag()});
}

template <std::size_t N>
inline json matrix_to_json(const ComplexMatrix<N> &m) {
    json rows = json::array();
    for (std::size_t r = 0; r < N; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < N; ++c) {
            row.push_back(complex_to_json(m(r, c)));
        }
        rows.push_back(row);
    }
    return rows;
}

template <std::size_t N>
inline void to_json(json &j, const HermitianMatrix<N> &m) {
    j = matrix_to_json(m.mat());
}

inline void to_json(json &j, const QubitState &q) {
    j = json{{"x", q.x}, {"z", complex_to_json(q.z)}};
}

inline void to_json(json &j, const OutcomeDistribution &d) {
    j = json{{"p_given", {{d.p_given[0][0], d.p_given[0][1]}, {d.p_given[1][0], d.p_given[1][1]}}},
             {"p_total", {d.p_total[0], d.p_total[1]}}};
}

inline void to_json(json &j, const StageOutcome &o) {
    j = json{{"p_given_1", o.p_given_1},
             {"p_given_2", o.p_given_2},
             {"p_total", o.p_total},
             {"lambda", o.lambda_infinite ? 0.0 : o.lambda},
             {"lambda_infinite", o.lambda_infinite},
             {"posterior", {o.posterior[0], o.posterior[1]}},
             {"stage2_error", o.stage2_error},
             {"state1_impossible", o.state1_impossible},
             {"state2_impossible", o.state2_impossible}};
}

inline void to_json(json &j, const SequentialStageReport &r) {
    j = json{{"outcome1", r.outcomes[0]},
             {"outcome2", r.outcomes[1]},
             {"total_error", r.total_error},
             {"degenerate_stage1", r.degenerate_stage1}};
}

inline void to_json(json &j, const ComparisonReport &r) {
    j = json{{"p_global", r.p_global},
             {"p_sequential", r.p_sequential},
             {"gap", r.gap},
             {"equality_class", std::string(equality_class_name(r.equality_class))}};
}

inline void to_json(json &j, const PairPureState &s) {
    j = json{{"alpha", complex_to_json(s.alpha)},
             {"beta", complex_to_json(s.beta)},
             {"gamma", complex_to_json(s.gamma)}};
}

inline void to_json(json &j, const GapDiagnostics &d) {
    j = json{{"u1", d.u1},
             {"u2", d.u2},
             {"tau_bar", d.tau_bar},
             {"tau_abs", d.tau_abs},
             {"gap_expression", d.gap_expression}};
}

inline void to_json(json &j, const EqualityDiagnosis &d) {
    j = json{{"parametric_equality", d.parametric_equality},
             {"phase_defined", d.phase_defined},
             {"phase_aligned", d.phase_aligned},
             {"magnitude_balanced_s1", d.magnitude_balanced_s1},
             {"magnitude_balanced_s2", d.magnitude_balanced_s2},
             {"amplitudes_real", d.amplitudes_real},
             {"swap_symmetric_family", d.swap_symmetric_family},
             {"antisymmetric_family", d.antisymmetric_family},
             {"symmetric_matched_family", d.symmetric_matched_family},
             {"product_states", d.product_states}};
}

inline void to_json(json &j, const SimulationResult &r) {
    j = json{{"trials", r.trials},
             {"errors", r.errors},
             {"empirical_error", r.empirical_error},
             {"std_error", r.std_error},
             {"seed", r.seed}};
}

inline void to_json(json &j, const SearchConfig &c) {
    j = json{{"grid_density", c.grid_density},
             {"random_trials", c.random_trials},
             {"refine_iterations", c.refine_iterations},
             {"seed", c.seed}};
}

inline void to_json(json &j, const IndependentAuditFinding &f) {
    j = json{{"index", f.index},       {"x1", f.x1},
             {"x2", f.x2},             {"z", complex_to_json(f.z)},
             {"p_global", f.p_global}, {"p_sequential", f.p_sequential},
             {"gap", f.gap},           {"reason", f.reason}};
}

inline void to_json(json &j, const IndependentAuditResult &r) {
    j = json{{"kind", "independent"},
             {"count", r.count},
             {"seed", r.seed},
             {"tol_gap", r.tol_gap},
             {"tol_param", r.tol_param},
             {"margin", r.margin},
             {"inequality_violations", r.inequality_violations},
             {"equality_violations", r.equality_violations},
             {"equality_confirmed", r.equality_confirmed},
             {"ambiguous_skipped", r.ambiguous_skipped},
             {"min_gap", r.min_gap},
             {"violations", r.violations()},
             {"examples", r.examples}};
}

inline void to_json(json &j, const EntangledAuditFinding &f) {
    j = json{{"index", f.index},
             {"state1",
              {{"alpha", complex_to_json(f.alpha1)},
               {"beta", complex_to_json(f.beta1)},
               {"gamma", complex_to_json(f.gamma1)}}},
             {"state2",
              {{"alpha", complex_to_json(f.alpha2)},
               {"beta", complex_to_json(f.beta2)},
               {"gamma", complex_to_json(f.gamma2)}}},
             {"p_global", f.p_global},
             {"p_sequential", f.p_sequential},
             {"gap_expression", f.gap_expression},
             {"reason", f.reason}};
}

inline void to_json(json &j, const EntangledAuditResult &r) {
    j = json{{"kind", "entangled"},
             {"count", r.count},
             {"seed", r.seed},
             {"tol_gap", r.tol_gap},
             {"tol_param", r.tol_param},
             {"margin", r.margin},
             {"gap_sign_violations", r.gap_sign_violations},
             {"error_order_violations", r.error_order_violations},
             {"gap_identity_violations", r.gap_identity_violations},
             {"overlap_bound_violations", r.overlap_bound_violations},
             {"equality_violations", r.equality_violations},
             {"equality_confirmed", r.equality_confirmed},
             {"ambiguous_skipped", r.ambiguous_skipped},
             {"max_gap_expression", r.max_gap_expression},
             {"product_count", r.product_count},
             {"product_violations", r.product_violations},
             {"product_worst_gap", r.product_worst_gap},
             {"violations", r.violations()},
             {"examples", r.examples}};
}

inline void to_json(json &j, const SpecialCaseAuditResult &r) {
    j = json{{"kind", "special-cases"},
             {"draws_per_family", r.draws_per_family},
             {"seed", r.seed},
             {"tol_gap", r.tol_gap},
             {"family_violations",
              {r.family_violations[0], r.family_violations[1], r.family_violations[2]}},
             {"worst_abs_gap", r.worst_abs_gap},
             {"violations", r.violations()},
             {"examples", r.examples}};
}

inline void to_json(json &j, const CrossFormAuditResult &r) {
    j = json{{"kind", "cross-forms"},
             {"count_per_family", r.count_per_family},
             {"seed", r.seed},
             {"tol", r.tol},
             {"independent_global_mismatches", r.independent_global_mismatches},
             {"independent_sequential_mismatches", r.independent_sequential_mismatches},
             {"entangled_global_mismatches", r.entangled_global_mismatches},
             {"entangled_sequential_mismatches", r.entangled_sequential_mismatches},
             {"degenerate_skipped", r.degenerate_skipped},
             {"worst_independent_global", r.worst_independent_global},
             {"worst_independent_bound_excess", r.worst_independent_bound_excess},
             {"worst_independent_sequential", r.worst_independent_sequential},
             {"worst_entangled_global", r.worst_entangled_global},
             {"worst_entangled_sequential", r.worst_entangled_sequential},
             {"violations", r.violations()}};
}

// ---- instance files ------------------------------------------------------

/// Everything a `single`, `pair`, or `entangled` invocation needs, as read
/// from flags or an instance file. Reports embed this block verbatim so any
/// output can be replayed.
struct InstanceSpec {
    std::string kind;  // "single" | "independent" | "entangled"
    double x1 = 0.0;
    double x2 = 0.0;
    cplx z;
    double prior1 = 0.5;  // only "single" may deviate from 1/2
    cplx alpha1, beta1, gamma1;
    cplx alpha2, beta2, gamma2;
    std::string mode = "canonicalize";  // entangled basis handling
};

inline void to_json(json &j, const InstanceSpec &s) {
    if (s.kind == "entangled") {
        j = json{{"kind", s.kind},
                 {"state1",
                  {{"alpha", complex_to_json(s.alpha1)},
                   {"beta", complex_to_json(s.beta1)},
                   {"gamma", complex_to_json(s.gamma1)}}},
                 {"state2",
                  {{"alpha", complex_to_json(s.alpha2)},
                   {"beta", complex_to_json(s.beta2)},
                   {"gamma", complex_to_json(s.gamma2)}}},
                 {"mode", s.mode}};
    } else {
        j = json{{"kind", s.kind},
                 {"x1", s.x1},
                 {"x2", s.x2},
                 {"z", complex_to_json(s.z)},
                 {"priors", {s.prior1, 1.0 - s.prior1}}};
    }
}

namespace detail {

inline const json &require_field(const json &j, const char *key, const std::string &path) {
    if (!j.is_object() || !j.contains(key)) {
        throw validation_error(path + key + ": missing field");
    }
    return j.at(key);
}

inline double parse_number(const json &v, const std::string &where) {
    if (!v.is_number()) {
        throw validation_error(where + ": expected a number");
    }
    return v.get<double>();
}

inline double number_field(const json &j, const char *key, const std::string &path) {
    return parse_number(require_field(j, key, path), path + key);
}

/// A complex value is either a plain number (purely real) or [re, im].
inline cplx parse_complex(const json &v, const std::string &where) {
    if (v.is_number()) {
        return cplx(v.get<double>(), 0.0);
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return cplx(v[0].get<double>(), v[1].get<double>());
    }
    throw validation_error(where + ": expected a number or a [re, im] pair");
}

inline cplx complex_field(const json &j, const char *key, const std::string &path) {
    return parse_complex(require_field(j, key, path), path + key);
}

}  // namespace detail

inline InstanceSpec parse_instance_spec(const json &j) {
    InstanceSpec spec;
    if (!j.is_object()) {
        throw validation_error("instance: expected a JSON object");
    }
    const json &kind = detail::require_field(j, "kind", "");
    if (!kind.is_string()) {
        throw validation_error("kind: expected a string");
    }
    spec.kind = kind.get<std::string>();

    if (spec.kind == "single" || spec.kind == "independent") {
        spec.x1 = detail::number_field(j, "x1", "");
        spec.x2 = detail::number_field(j, "x2", "");
        spec.z = j.contains("z") ? detail::parse_complex(j.at("z"), "z") : cplx(0.0, 0.0);
        if (j.contains("priors")) {
            const json &priors = j.at("priors");
            if (!priors.is_array() || priors.size() != 2) {
                throw validation_error("priors: expected [p1, p2]");
            }
            const double p1 = detail::parse_number(priors[0], "priors[0]");
            const double p2 = detail::parse_number(priors[1], "priors[1]");
            if (std::abs(p1 + p2 - 1.0) > 1e-12) {
                throw validation_error("priors: must sum to 1");
            }
            spec.prior1 = p1;
        }
        if (spec.kind == "independent" && spec.prior1 != 0.5) {
            throw validation_error("priors: replica-pair problems assume equal priors");
        }
    } else if (spec.kind == "entangled") {
        const json &s1 = detail::require_field(j, "state1", "");
        const json &s2 = detail::require_field(j, "state2", "");
        spec.alpha1 = detail::complex_field(s1, "alpha", "state1.");
        spec.beta1 = detail::complex_field(s1, "beta", "state1.");
        spec.gamma1 = detail::complex_field(s1, "gamma", "state1.");
        spec.alpha2 = detail::complex_field(s2, "alpha", "state2.");
        spec.beta2 = detail::complex_field(s2, "beta", "state2.");
        spec.gamma2 = detail::complex_field(s2, "gamma", "state2.");
        if (j.contains("mode")) {
            const json &mode = j.at("mode");
            if (!mode.is_string() ||
                (mode.get<std::string>() != "validate" && mode.get<std::string>() != "canonicalize")) {
                throw validation_error("mode: expected \"validate\" or \"canonicalize\"");
            }
            spec.mode = mode.get<std::string>();
        }
    } else {
        throw validation_error("kind: expected \"single\", \"independent\", or \"entangled\"");
    }
    return spec;
}

/// Hypotheses for a one-copy problem in the shared-basis parametrization.
inline Hypotheses<2> make_single_hypotheses(const InstanceSpec &spec) {
    return Hypotheses<2>(qubit_state_to_operator(QubitState(spec.x1, spec.z)),
                         qubit_state_to_operator(QubitState(spec.x2, spec.z)), spec.prior1);
}

inline IndependentPairProblem make_pair_problem(const InstanceSpec &spec) {
    return IndependentPairProblem(spec.x1, spec.x2, spec.z);
}

inline CanonicalizedEntangled make_entangled_problem(const InstanceSpec &spec) {
    const PairPureState psi1(spec.alpha1, spec.beta1, spec.gamma1);
    const PairPureState psi2(spec.alpha2, spec.beta2, spec.gamma2);
    return validate_or_canonicalize(psi1, psi2,
                                    spec.mode == "validate" ? CanonicalizationMode::validate
                                                            : CanonicalizationMode::canonicalize);
}

}  // namespace qht
