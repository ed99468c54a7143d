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

#include <gtest/gtest.h>

#include <cmath>

#include "qht/discrimination.hpp"
#include "qht/eig.hpp"
#include "qht/rng.hpp"
#include "qht/sampling.hpp"

namespace qht {
namespace {

HermitianMatrix<2> diag2(double a, double b) {
    ComplexMatrix<2> m;
    m(0, 0) = a;
    m(1, 1) = b;
    return HermitianMatrix<2>::trusted(m);
}

TEST(Discrimination, PureStateVersusMaximallyMixed) {
    // diag(1,0) against I/2 at equal priors: the weighted difference has
    // eigenvalues {1/4, -1/4}, so the best error is 1/2 - 1/2*(1/2) = 1/4.
    const Hypotheses<2> h(diag2(1.0, 0.0), diag2(0.5, 0.5), 0.5);
    EXPECT_NEAR(helstrom_error(h), 0.25, 1e-15);

    const auto m = helstrom_measurement(h);
    EXPECT_NEAR(mean_error(h, m), 0.25, 1e-15);
    // Outcome 2 projects onto the strictly negative eigenspace, here |1><1|.
    EXPECT_NEAR(std::abs(m.pi2()(1, 1)), 1.0, 1e-14);
    EXPECT_LT(std::abs(m.pi2()(0, 0)), 1e-14);
}

TEST(Discrimination, OrthogonalPureStatesAreDistinguishable) {
    const Hypotheses<2> h(diag2(1.0, 0.0), diag2(0.0, 1.0), 0.5);
    EXPECT_NEAR(helstrom_error(h), 0.0, 1e-15);
}

TEST(Discrimination, IdenticalHypothesesDecideByPrior) {
    // rho1 == rho2: no measurement helps; the error is min(prior1, prior2)
    // and the convention is "always decide the likelier hypothesis".
    const Hypotheses<2> h(diag2(0.5, 0.5), diag2(0.5, 0.5), 0.3);
    EXPECT_NEAR(helstrom_error(h), 0.3, 1e-15);
    const auto m = helstrom_measurement(h);
    // prior2 dominates: the negative eigenspace is everything.
    EXPECT_LT((m.pi2().mat() - ComplexMatrix<2>::identity()).max_abs(), 1e-14);
}

TEST(Discrimination, ExtremePriorStillValid) {
    const Hypotheses<2> h(diag2(1.0, 0.0), diag2(0.5, 0.5), 1.0);
    EXPECT_NEAR(helstrom_error(h), 0.0, 1e-15);
}

TEST(Discrimination, ErrorIsSymmetricUnderHypothesisSwap) {
    for (std::uint64_t i = 0; i < 200; ++i) {
        StreamRng rng(31, i);
        const auto r1 = sample_density<2>(rng);
        const auto r2 = sample_density<2>(rng);
        const double prior = rng.uniform();
        const double e12 = helstrom_error(Hypotheses<2>(r1, r2, prior));
        const double e21 = helstrom_error(Hypotheses<2>(r2, r1, 1.0 - prior));
        EXPECT_NEAR(e12, e21, 1e-13) << "stream " << i;
    }
}

TEST(Discrimination, OptimalErrorIsNeverBeatenByRandomMeasurements) {
    for (std::uint64_t i = 0; i < 100; ++i) {
        StreamRng rng(57, i);
        const auto r1 = sample_density<2>(rng);
        const auto r2 = sample_density<2>(rng);
        const Hypotheses<2> h(r1, r2, 0.5);
        const double best = helstrom_error(h);
        for (int k = 0; k < 20; ++k) {
            const auto m = sample_measurement2(rng);
            EXPECT_GE(mean_error(h, m), best - 1e-12) << "stream " << i;
        }
    }
}

TEST(Discrimination, QubitClosedFormMatchesEigRoute) {
    // For qubits the optimal error is 1/2 (1 - ||p1 rho1 - p2 rho2||_1) with
    // the trace norm available in closed form from trace and determinant.
    for (std::uint64_t i = 0; i < 500; ++i) {
        StreamRng rng(73, i);
        const auto r1 = sample_density<2>(rng);
        const auto r2 = sample_density<2>(rng);
        const double p1 = rng.uniform();
        const Hypotheses<2> h(r1, r2, p1);

        const auto g = h.weighted_difference();
        const double tr = g.trace();
        const double det = (g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0)).real();
        const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
        const double trace_norm = (std::abs(tr + disc) + std::abs(tr - disc)) / 2.0;
        EXPECT_NEAR(helstrom_error(h), 0.5 * (1.0 - trace_norm), 1e-13) << "stream " << i;
    }
}

TEST(Discrimination, OutcomeTableIsConsistent) {
    const QubitState q1(0.9, cplx(0.2, 0.0));
    const QubitState q2(0.3, cplx(0.2, 0.0));
    const Hypotheses<2> h(qubit_state_to_operator(q1), qubit_state_to_operator(q2), 0.5);
    const auto m = helstrom_measurement(h);
    const auto d = outcome_probabilities(h, m);

    // Rows are conditional distributions; the marginal mixes them by prior.
    EXPECT_NEAR(d.p(1, 1) + d.p(2, 1), 1.0, 1e-14);
    EXPECT_NEAR(d.p(1, 2) + d.p(2, 2), 1.0, 1e-14);
    EXPECT_NEAR(d.marginal(1), 0.5 * d.p(1, 1) + 0.5 * d.p(1, 2), 1e-14);
    // Mean error assembled from the table agrees with the direct value.
    EXPECT_NEAR(0.5 * d.p(2, 1) + 0.5 * d.p(1, 2), helstrom_error(h), 1e-14);
}

TEST(Discrimination, PosteriorFollowsBayesRule) {
    const Hypotheses<2> h(diag2(1.0, 0.0), diag2(0.5, 0.5), 0.5);
    const auto m = helstrom_measurement(h);
    const auto d = outcome_probabilities(h, m);
    for (int outcome = 1; outcome <= 2; ++outcome) {
        const auto post = bayes_posterior(h, d, outcome);
        EXPECT_NEAR(post[0] + post[1], 1.0, 1e-14);
        EXPECT_NEAR(post[0], 0.5 * d.p(outcome, 1) / d.marginal(outcome), 1e-14);
    }
}

TEST(Discrimination, PosteriorRejectsImpossibleOutcome) {
    // At prior1 = 1/4 the weighted difference is negative definite, so the
    // optimal test always reports outcome 2; conditioning on outcome 1 is
    // undefined and must throw rather than divide by zero.
    const Hypotheses<2> h(diag2(1.0, 0.0), diag2(0.5, 0.5), 0.25);
    const auto m = helstrom_measurement(h);
    const auto d = outcome_probabilities(h, m);
    EXPECT_THROW(bayes_posterior(h, d, 1), validation_error);
    EXPECT_NO_THROW(bayes_posterior(h, d, 2));
}

TEST(Discrimination, FourDimensionalKnownCase) {
    // Orthogonal product states: perfectly distinguishable.
    const auto e0 = diag2(1.0, 0.0);
    const auto e1 = diag2(0.0, 1.0);
    const Hypotheses<4> h(tensor_product(e0, e0), tensor_product(e1, e1), 0.5);
    EXPECT_NEAR(helstrom_error(h), 0.0, 1e-14);

    const Hypotheses<4> same(tensor_product(e0, e0), tensor_product(e0, e0), 0.5);
    EXPECT_NEAR(helstrom_error(same), 0.5, 1e-14);
}

TEST(Discrimination, ValidationRejectsBadDensities) {
    ComplexMatrix<2> neg;
    neg(0, 0) = 1.2;
    neg(1, 1) = -0.2;
    EXPECT_THROW(Hypotheses<2>(HermitianMatrix<2>::trusted(neg), diag2(0.5, 0.5), 0.5),
                 validation_error);

    ComplexMatrix<2> off_trace;
    off_trace(0, 0) = 0.6;
    off_trace(1, 1) = 0.6;
    EXPECT_THROW(Hypotheses<2>(HermitianMatrix<2>::trusted(off_trace), diag2(0.5, 0.5), 0.5),
                 validation_error);

    EXPECT_THROW(Hypotheses<2>(diag2(0.5, 0.5), diag2(0.5, 0.5), 1.5), validation_error);
    EXPECT_THROW(Hypotheses<2>(diag2(0.5, 0.5), diag2(0.5, 0.5), -0.1), validation_error);
}

TEST(Discrimination, QubitStateValidation) {
    EXPECT_THROW(QubitState(1.2, 0.0), validation_error);
    EXPECT_THROW(QubitState(-0.1, 0.0), validation_error);
    // |z|^2 > x(1-x) breaks positivity.
    EXPECT_THROW(QubitState(0.5, cplx(0.6, 0.0)), validation_error);
    EXPECT_NO_THROW(QubitState(0.5, cplx(0.5, 0.0)));
    EXPECT_NO_THROW(QubitState(0.0, 0.0));
    EXPECT_NO_THROW(QubitState(1.0, 0.0));
}

TEST(Discrimination, MeasurementValidation) {
    // Operators must partition the identity.
    EXPECT_THROW(TwoOutcomeMeasurement<2>(diag2(1.0, 0.5), diag2(0.3, 0.5)), validation_error);
    // And must each be positive.
    EXPECT_THROW(TwoOutcomeMeasurement<2>(diag2(1.2, 0.5), diag2(-0.2, 0.5)), validation_error);
    EXPECT_NO_THROW(TwoOutcomeMeasurement<2>(diag2(0.7, 0.4), diag2(0.3, 0.6)));
}

}  // namespace
}  // namespace qht
