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

#include <array>
#include <cmath>

#include "qht/discrimination.hpp"
#include "qht/eig.hpp"
#include "qht/errors.hpp"
#include "qht/matrix.hpp"
#include "qht/replicas.hpp"

namespace qht {

constexpr double kSharedBasisTol = 1e-10;
constexpr double kPhaseAlignmentTol = 1e-8;

/// Symmetric two-qubit pure state alpha|00> + beta(|01> + |10>) + gamma|11>.
/// The equal weight on |01> and |10> makes both one-qubit marginals
/// identical, so the two subsystems really are replicas of one state.
struct PairPureState {
    cplx alpha;
    cplx beta;
    cplx gamma;

    PairPureState(cplx a, cplx b, cplx g) : alpha(a), beta(b), gamma(g) {
        if (!is_finite(alpha) || !is_finite(beta) || !is_finite(gamma)) {
            throw validation_error("pair state: non-finite amplitude");
        }
        const double norm_sq = std::norm(alpha) + 2.0 * std::norm(beta) + std::norm(gamma);
        if (std::abs(norm_sq - 1.0) > 1e-12) {
            throw validation_error("pair state: |alpha|^2 + 2|beta|^2 + |gamma|^2 deviates from 1 by more than 1e-12");
        }
    }

    ComplexVector<4> amplitudes() const {
        ComplexVector<4> v;
        v[0] = alpha;
        v[1] = beta;
        v[2] = beta;
        v[3] = gamma;
        return v;
    }

    StateVector<4> state() const {
        return StateVector<4>(amplitudes());
    }

    /// The one-qubit marginal, identical for either subsystem.
    cplx reduced_z() const {
        return alpha * std::conj(beta) + beta * std::conj(gamma);
    }
    double reduced_x() const {
        return std::norm(alpha) + std::norm(beta);
    }
};

inline QubitState reduced_state(const PairPureState &psi) {
    return QubitState(psi.reduced_x(), psi.reduced_z());
}

/// Two entangled-pair hypotheses with equal priors, expressed in the basis
/// where the difference of their reduced states is diagonal. That basis
/// choice is equivalent to both states sharing the reduced off-diagonal
/// alpha*conj(beta) + beta*conj(gamma), which construction enforces.
class EntangledProblem {
  public:
    EntangledProblem(PairPureState psi1, PairPureState psi2) : psi1_(psi1), psi2_(psi2) {
        if (std::abs(psi1_.reduced_z() - psi2_.reduced_z()) > kSharedBasisTol) {
            throw validation_error(
                "entangled problem: states are not expressed in a shared diagonalizing basis "
                "(reduced off-diagonals differ beyond 1e-10); canonicalize first");
        }
    }

    const PairPureState &psi1() const {
        return psi1_;
    }
    const PairPureState &psi2() const {
        return psi2_;
    }
    double x1() const {
        return psi1_.reduced_x();
    }
    double x2() const {
        return psi2_.reduced_x();
    }

    /// <psi2|psi1>, the sole input to the joint-measurement error.
    cplx overlap() const {
        return std::conj(psi2_.alpha) * psi1_.alpha + 2.0 * std::conj(psi2_.beta) * psi1_.beta +
               std::conj(psi2_.gamma) * psi1_.gamma;
    }

    EntangledProblem swapped() const {
        return EntangledProblem(psi2_, psi1_);
    }

  private:
    PairPureState psi1_;
    PairPureState psi2_;
};

enum class CanonicalizationMode {
    validate,      // reject inputs not already in the shared basis
    canonicalize,  // rotate both states into it
};

struct CanonicalizedEntangled {
    EntangledProblem problem;
    ComplexMatrix<2> basis;    // original = (basis x basis) applied to canonical
    bool degenerate_reduced;   // reduced states coincide; any basis diagonalizes
};

/// Build an EntangledProblem from raw amplitudes. In canonicalize mode the
/// shared one-qubit unitary that diagonalizes the difference of the reduced
/// states is applied to both inputs (as U on each qubit), which preserves the
/// symmetric amplitude structure, the overlap, and both error values.
inline CanonicalizedEntangled validate_or_canonicalize(const PairPureState &psi1, const PairPureState &psi2,
                                                       CanonicalizationMode mode) {
    const auto r1 = qubit_state_to_operator(reduced_state(psi1));
    const auto r2 = qubit_state_to_operator(reduced_state(psi2));
    const auto spectrum = eig_hermitian(r1 - r2);
    const bool degenerate = std::max(std::abs(spectrum.eigenvalues[0]), std::abs(spectrum.eigenvalues[1])) <= 1e-12;

    if (mode == CanonicalizationMode::validate) {
        return CanonicalizedEntangled{EntangledProblem(psi1, psi2), ComplexMatrix<2>::identity(), degenerate};
    }

    const ComplexMatrix<2> u = spectrum.eigenvectors.adjoint();
    std::array<PairPureState, 2> rotated = {psi1, psi2};
    for (PairPureState &psi : rotated) {
        const StateVector<4> out = apply_local_basis_change(u, psi.state());
        if (std::abs(out[1] - out[2]) > 1e-10) {
            throw numeric_error("canonicalization: symmetric amplitude structure was not preserved");
        }
        psi = PairPureState(out[0], 0.5 * (out[1] + out[2]), out[3]);
    }
    if (std::abs(rotated[0].reduced_z() - rotated[1].reduced_z()) > kSharedBasisTol) {
        throw numeric_error("canonicalization: failed to align the reduced off-diagonals");
    }
    return CanonicalizedEntangled{EntangledProblem(rotated[0], rotated[1]), spectrum.eigenvectors, degenerate};
}

/// Minimum error of a joint measurement on the pair: depends on the two pure
/// hypotheses only through their overlap.
inline double global_error_entangled(const EntangledProblem &e) {
    const double t2 = std::norm(e.overlap());
    return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - t2)));
}

/// Cross-check route: the dim-4 minimum-error test on the two projectors.
inline double global_error_entangled_generic(const EntangledProblem &e) {
    return helstrom_error(
        Hypotheses<4>(projector(e.psi1().state()), projector(e.psi2().state()), 0.5));
}

/// Conditional data seen by the second observer after the first one obtains
/// a given outcome: likelihoods and the reduced post-measurement states.
struct PostMeasurementBranch {
    HermitianMatrix<2> rho1_cond;
    HermitianMatrix<2> rho2_cond;
    double p_given_1 = 0.0;
    double p_given_2 = 0.0;
    bool state1_impossible = false;
    bool state2_impossible = false;
};

namespace detail {

/// Project subsystem A with pi_s, renormalize, and trace A out. A hypothesis
/// annihilated by the projector gets a flagged placeholder; every use of that
/// slot carries probability weight exactly zero.
inline PostMeasurementBranch reduce_after_outcome(const EntangledProblem &e, const HermitianMatrix<2> &pi_s) {
    const ComplexMatrix<4> op = tensor_product(pi_s.mat(), ComplexMatrix<2>::identity());
    PostMeasurementBranch branch;
    const std::array<const PairPureState *, 2> states = {&e.psi1(), &e.psi2()};
    for (int k = 0; k < 2; ++k) {
        const ComplexVector<4> projected = op * states[k]->amplitudes();
        const double p = std::clamp(projected.norm_squared(), 0.0, 1.0);
        double &p_out = (k == 0) ? branch.p_given_1 : branch.p_given_2;
        bool &impossible = (k == 0) ? branch.state1_impossible : branch.state2_impossible;
        HermitianMatrix<2> &rho = (k == 0) ? branch.rho1_cond : branch.rho2_cond;
        p_out = p;
        if (p < kImpossibleBranch) {
            impossible = true;
            rho = HermitianMatrix<2>::identity().scaled(0.5);
            continue;
        }
        ComplexVector<4> normalized = projected;
        normalized *= 1.0 / std::sqrt(p);
        rho = partial_trace(HermitianMatrix<4>::trusted(outer(normalized, normalized)), Subsystem::A);
    }
    return branch;
}

inline TwoOutcomeMeasurement<2> stage_one_measurement(const EntangledProblem &e) {
    return helstrom_measurement(Hypotheses<2>(qubit_state_to_operator(reduced_state(e.psi1())),
                                              qubit_state_to_operator(reduced_state(e.psi2())), 0.5));
}

inline BranchSet entangled_branches(const EntangledProblem &e) {
    const auto m = stage_one_measurement(e);
    BranchSet set;
    set.degenerate_stage1 = m.pi2().trace() < 0.5;
    for (int s = 0; s < 2; ++s) {
        const PostMeasurementBranch reduced = reduce_after_outcome(e, m.pi(s + 1));
        BranchInput &b = set.branches[s];
        b.p_given_1 = reduced.p_given_1;
        b.p_given_2 = reduced.p_given_2;
        b.rho1_cond = reduced.rho1_cond;
        b.rho2_cond = reduced.rho2_cond;
        b.state1_impossible = reduced.state1_impossible;
        b.state2_impossible = reduced.state2_impossible;
    }
    return set;
}

}  // namespace detail

inline PostMeasurementBranch post_measurement_states(const EntangledProblem &e, int outcome) {
    if (outcome != 1 && outcome != 2) {
        throw validation_error("post-measurement states: outcome must be 1 or 2");
    }
    return detail::reduce_after_outcome(e, detail::stage_one_measurement(e).pi(outcome));
}

/// Closed form for the sequential protocol on entangled pairs.
inline double sequential_error_entangled_closed(const EntangledProblem &e) {
    const double dx = e.x1() - e.x2();
    const cplx ab = e.psi1().alpha * e.psi2().beta - e.psi2().alpha * e.psi1().beta;
    const cplx gb = e.psi1().gamma * e.psi2().beta - e.psi2().gamma * e.psi1().beta;
    return 0.5 - 0.25 * (std::sqrt(dx * dx + 4.0 * std::norm(ab)) +
                         std::sqrt(dx * dx + 4.0 * std::norm(gb)));
}

/// Run the protocol generically: optimal test on the reduced states of A,
/// von Neumann reduction of the pair, posterior-weighted optimal test on the
/// conditional B states, marginal-weighted average.
inline SequentialStageReport sequential_error_entangled_protocol(const EntangledProblem &e) {
    const detail::BranchSet set = detail::entangled_branches(e);
    return detail::assemble_two_stage(set.branches, set.degenerate_stage1);
}

/// The quantities controlling the squared-distinguishability gap between the
/// two strategies, plus the gap expression itself, which equals
/// (1 - 2*P_sequential)^2 - (1 - 2*P_global)^2 and is never positive.
struct GapDiagnostics {
    double u1 = 0.0;        // (x1+x2)/2 - |alpha1*conj(alpha2) + beta1*conj(beta2)|
    double u2 = 0.0;        // (x1+x2)/2 + the same modulus
    double tau_bar = 0.0;   // sum of the two cross-term moduli; >= |tau|
    double tau_abs = 0.0;   // |<psi2|psi1>|
    double gap_expression = 0.0;
};

inline GapDiagnostics gap_diagnostics(const EntangledProblem &e) {
    GapDiagnostics d;
    const double m = std::abs(e.psi1().alpha * std::conj(e.psi2().alpha) +
                              e.psi1().beta * std::conj(e.psi2().beta));
    const double g = std::abs(e.psi1().gamma * std::conj(e.psi2().gamma) +
                              e.psi1().beta * std::conj(e.psi2().beta));
    const double half_sum = 0.5 * (e.x1() + e.x2());
    d.u1 = half_sum - m;
    d.u2 = half_sum + m;
    d.tau_bar = m + g;
    d.tau_abs = std::abs(e.overlap());

    // Each factor is non-negative for normalized symmetric states; only
    // roundoff can push the product below zero.
    const double root_arg = d.u1 * d.u2 * (1.0 - d.tau_bar - d.u1) * (1.0 + d.tau_bar - d.u2);
    if (root_arg < -1e-12) {
        throw numeric_error("gap diagnostics: square-root argument negative beyond roundoff");
    }
    d.gap_expression = d.u1 * (d.u2 - 1.0 - d.tau_bar) + d.u2 * (d.u1 - 1.0 + d.tau_bar) +
                       d.tau_abs * d.tau_abs - d.tau_bar * d.tau_bar +
                       2.0 * std::sqrt(std::max(0.0, root_arg));
    return d;
}

/// Every way this library can certify that the sequential protocol matches
/// the joint measurement, evaluated on one instance.
struct EqualityDiagnosis {
    bool parametric_equality = false;  // tau_bar = |tau| and u1(1+|tau|) = u2(1-|tau|)
    bool phase_defined = false;        // both first-stage matrix elements <psi2|Pi_s|psi1> nonzero
    bool phase_aligned = false;        // their arguments agree (angular distance <= 1e-8 rad)
    bool magnitude_balanced_s1 = false;  // 2|<psi2|Pi_s|psi1>| = |tau| (p(s|1) + p(s|2)) for s = 1
    bool magnitude_balanced_s2 = false;  // same for s = 2
    bool amplitudes_real = false;
    bool swap_symmetric_family = false;     // real amplitudes with alpha1=gamma2, alpha2=gamma1, beta1=beta2
    bool antisymmetric_family = false;      // real amplitudes with gamma_k = -alpha_k
    bool symmetric_matched_family = false;  // real amplitudes with gamma_k = alpha_k, alpha1*beta1 = alpha2*beta2
    bool product_states = false;            // both hypotheses factor into identical one-qubit states
};

inline EqualityDiagnosis equality_conditions(const EntangledProblem &e, double tol = 1e-6) {
    EqualityDiagnosis diag;
    const GapDiagnostics d = gap_diagnostics(e);
    diag.parametric_equality = std::abs(d.tau_bar - d.tau_abs) <= tol &&
                               std::abs(d.u1 * (1.0 + d.tau_abs) - d.u2 * (1.0 - d.tau_abs)) <= tol;

    const auto m = detail::stage_one_measurement(e);
    const ComplexVector<4> v1 = e.psi1().amplitudes();
    const ComplexVector<4> v2 = e.psi2().amplitudes();
    std::array<cplx, 2> element{};
    std::array<double, 2> p1{}, p2{};
    for (int s = 0; s < 2; ++s) {
        const ComplexMatrix<4> op = tensor_product(m.pi(s + 1).mat(), ComplexMatrix<2>::identity());
        const ComplexVector<4> op_v1 = op * v1;
        element[s] = inner(v2, op_v1);
        p1[s] = inner(v1, op_v1).real();
        p2[s] = inner(v2, op * v2).real();
    }
    diag.phase_defined = std::abs(element[0]) >= tol && std::abs(element[1]) >= tol;
    if (diag.phase_defined) {
        const double angle = std::arg(element[0] * std::conj(element[1]));
        diag.phase_aligned = std::abs(angle) <= kPhaseAlignmentTol;
    }
    diag.magnitude_balanced_s1 = std::abs(2.0 * std::abs(element[0]) - d.tau_abs * (p1[0] + p2[0])) <= tol;
    diag.magnitude_balanced_s2 = std::abs(2.0 * std::abs(element[1]) - d.tau_abs * (p1[1] + p2[1])) <= tol;

    const PairPureState &s1 = e.psi1();
    const PairPureState &s2 = e.psi2();
    diag.amplitudes_real = std::abs(s1.alpha.imag()) <= tol && std::abs(s1.beta.imag()) <= tol &&
                           std::abs(s1.gamma.imag()) <= tol && std::abs(s2.alpha.imag()) <= tol &&
                           std::abs(s2.beta.imag()) <= tol && std::abs(s2.gamma.imag()) <= tol;
    if (diag.amplitudes_real) {
        diag.swap_symmetric_family = std::abs(s1.alpha - s2.gamma) <= tol &&
                                     std::abs(s2.alpha - s1.gamma) <= tol &&
                                     std::abs(s1.beta - s2.beta) <= tol;
        diag.antisymmetric_family =
            std::abs(s1.alpha + s1.gamma) <= tol && std::abs(s2.alpha + s2.gamma) <= tol;
        diag.symmetric_matched_family = std::abs(s1.alpha - s1.gamma) <= tol &&
                                        std::abs(s2.alpha - s2.gamma) <= tol &&
                                        std::abs(s1.alpha * s1.beta - s2.alpha * s2.beta) <= tol;
    }
    diag.product_states = std::abs(s1.alpha * s1.gamma - s1.beta * s1.beta) <= tol &&
                          std::abs(s2.alpha * s2.gamma - s2.beta * s2.beta) <= tol;
    return diag;
}

}  // namespace qht
