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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "qht/eig.hpp"
#include "qht/errors.hpp"
#include "qht/matrix.hpp"

namespace qht {

constexpr double kDensityTraceTol = 1e-12;
constexpr double kDensityPsdTol = 1e-10;
constexpr double kHelstromZeroTol = 1e-12;

/// A qubit density matrix [[x, z], [z*, 1-x]] written in the basis where the
/// difference of the two hypotheses is diagonal. Both hypotheses of a
/// discrimination problem share the same off-diagonal z in that basis, so a
/// pair of these plus one z describes a whole problem.
struct QubitState {
    double x;
    cplx z;

    QubitState(double x_in, cplx z_in) : x(x_in), z(z_in) {
        if (!std::isfinite(x) || !is_finite(z)) {
            throw validation_error("qubit state: non-finite parameter");
        }
        if (x < -1e-12 || x > 1.0 + 1e-12) {
            throw validation_error("qubit state: x must lie in [0, 1]");
        }
        x = std::clamp(x, 0.0, 1.0);
        if (std::norm(z) > x * (1.0 - x) + 1e-12) {
            throw validation_error("qubit state: |z|^2 exceeds x(1-x), matrix not positive semidefinite");
        }
    }
};

inline HermitianMatrix<2> qubit_state_to_operator(const QubitState &q) {
    ComplexMatrix<2> m;
    m(0, 0) = q.x;
    m(0, 1) = q.z;
    m(1, 0) = std::conj(q.z);
    m(1, 1) = 1.0 - q.x;
    return HermitianMatrix<2>::trusted(m);
}

template <std::size_t N>
inline void validate_density(const HermitianMatrix<N> &rho, const char *label) {
    if (std::abs(rho.trace() - 1.0) > kDensityTraceTol) {
        throw validation_error(std::string(label) + ": trace deviates from 1 by more than 1e-12");
    }
    if (!is_positive_semidefinite(rho, kDensityPsdTol)) {
        throw validation_error(std::string(label) + ": negative eigenvalue beyond 1e-10");
    }
}

/// A binary discrimination problem: two density matrices with a priori
/// probabilities (prior2 is derived, so the two always sum to 1 exactly).
template <std::size_t N>
class Hypotheses {
    static_assert(N == 2 || N == 4, "only single-qubit and two-qubit problems are supported");

  public:
    Hypotheses(HermitianMatrix<N> rho1, HermitianMatrix<N> rho2, double prior1)
        : rho1_(rho1), rho2_(rho2), prior1_(prior1) {
        if (!std::isfinite(prior1) || prior1 < 0.0 || prior1 > 1.0) {
            throw validation_error("hypotheses: prior1 must lie in [0, 1]");
        }
        validate_density(rho1_, "hypotheses: rho1");
        validate_density(rho2_, "hypotheses: rho2");
    }

    static constexpr std::size_t dim = N;
    const HermitianMatrix<N> &rho1() const {
        return rho1_;
    }
    const HermitianMatrix<N> &rho2() const {
        return rho2_;
    }
    double prior1() const {
        return prior1_;
    }
    double prior2() const {
        return 1.0 - prior1_;
    }

    /// prior1*rho1 - prior2*rho2, the operator whose spectrum decides
    /// everything about the optimal test.
    HermitianMatrix<N> weighted_difference() const {
        return rho1_.scaled(prior1_) - rho2_.scaled(prior2());
    }

  private:
    HermitianMatrix<N> rho1_;
    HermitianMatrix<N> rho2_;
    double prior1_;
};

/// Two positive operators that partition the identity. Outcome i is read as
/// "decide hypothesis i".
template <std::size_t N>
class TwoOutcomeMeasurement {
  public:
    TwoOutcomeMeasurement(const HermitianMatrix<N> &pi1, const HermitianMatrix<N> &pi2)
        : pi1_(pi1), pi2_(pi2) {
        if (((pi1_ + pi2_) - HermitianMatrix<N>::identity()).mat().max_abs() > 1e-12) {
            throw validation_error("measurement: operators do not sum to the identity within 1e-12");
        }
        if (!is_positive_semidefinite(pi1_, kDensityPsdTol) || !is_positive_semidefinite(pi2_, kDensityPsdTol)) {
            throw validation_error("measurement: operator with negative eigenvalue beyond 1e-10");
        }
    }

    /// For operators positive by construction (sums of projectors and their
    /// identity complements); skips the eigenvalue checks.
    static TwoOutcomeMeasurement trusted(const HermitianMatrix<N> &pi1, const HermitianMatrix<N> &pi2) {
        TwoOutcomeMeasurement m;
        m.pi1_ = pi1;
        m.pi2_ = pi2;
        return m;
    }

    const HermitianMatrix<N> &pi1() const {
        return pi1_;
    }
    const HermitianMatrix<N> &pi2() const {
        return pi2_;
    }
    const HermitianMatrix<N> &pi(int outcome) const {
        return outcome == 1 ? pi1_ : pi2_;
    }

  private:
    TwoOutcomeMeasurement() = default;

    HermitianMatrix<N> pi1_;
    HermitianMatrix<N> pi2_;
};

/// Conditional outcome table. p_given[i][s] is the probability of reporting
/// outcome s+1 when the true state is hypothesis i+1; p_total[s] marginalizes
/// over the priors.
struct OutcomeDistribution {
    std::array<std::array<double, 2>, 2> p_given{};
    std::array<double, 2> p_total{};

    double p(int outcome, int hypothesis) const {
        return p_given[hypothesis - 1][outcome - 1];
    }
    double marginal(int outcome) const {
        return p_total[outcome - 1];
    }
};

/// Minimum-error measurement: project onto the strictly negative eigenspace
/// of prior1*rho1 - prior2*rho2 for outcome 2. Eigenvalues within 1e-12 of
/// zero count as non-negative, so identical hypotheses yield (identity, 0),
/// i.e. "always decide 1".
template <std::size_t N>
inline TwoOutcomeMeasurement<N> helstrom_measurement(const Hypotheses<N> &h) {
    const auto spectrum = eig_hermitian(h.weighted_difference());
    ComplexMatrix<N> pi2;
    for (std::size_t i = 0; i < N; ++i) {
        if (spectrum.eigenvalues[i] <= -kHelstromZeroTol) {
            pi2 += outer(spectrum.eigenvector(i), spectrum.eigenvector(i));
        }
    }
    const auto pi2_h = HermitianMatrix<N>::trusted(pi2);
    return TwoOutcomeMeasurement<N>::trusted(HermitianMatrix<N>::identity() - pi2_h, pi2_h);
}

/// Minimum achievable mean error: prior2 plus the negative part of the
/// spectrum of the weighted difference.
template <std::size_t N>
inline double helstrom_error(const Hypotheses<N> &h) {
    return h.prior2() + negative_eigenvalue_sum(h.weighted_difference());
}

/// prior1*tr(rho1 pi2) + prior2*tr(rho2 pi1): the probability of deciding
/// wrongly under the given measurement.
template <std::size_t N>
inline double mean_error(const Hypotheses<N> &h, const TwoOutcomeMeasurement<N> &m) {
    return h.prior1() * trace_product(h.rho1(), m.pi2()) + h.prior2() * trace_product(h.rho2(), m.pi1());
}

template <std::size_t N>
inline OutcomeDistribution outcome_probabilities(const Hypotheses<N> &h, const TwoOutcomeMeasurement<N> &m) {
    OutcomeDistribution d;
    for (int i = 0; i < 2; ++i) {
        const HermitianMatrix<N> &rho = (i == 0) ? h.rho1() : h.rho2();
        for (int s = 0; s < 2; ++s) {
            d.p_given[i][s] = std::clamp(trace_product(rho, m.pi(s + 1)), 0.0, 1.0);
        }
    }
    for (int s = 0; s < 2; ++s) {
        d.p_total[s] = h.prior1() * d.p_given[0][s] + h.prior2() * d.p_given[1][s];
    }
    return d;
}

/// Posterior (for hypothesis 1 and 2) after observing `outcome`.
template <std::size_t N>
inline std::array<double, 2> bayes_posterior(const Hypotheses<N> &h, const OutcomeDistribution &d, int outcome) {
    if (outcome != 1 && outcome != 2) {
        throw validation_error("posterior: outcome must be 1 or 2");
    }
    const double marginal = d.marginal(outcome);
    if (marginal <= 0.0) {
        throw validation_error("posterior: cannot condition on an outcome of zero probability");
    }
    return {h.prior1() * d.p(outcome, 1) / marginal, h.prior2() * d.p(outcome, 2) / marginal};
}

}  // namespace qht
