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

#include <algorithm>
#include <cmath>
#include <functional>

#include "qht/eig.hpp"
#include "qht/matrix.hpp"
#include "qht/rng.hpp"
#include "qht/sampling.hpp"

namespace qht {
namespace {

template <std::size_t N>
double reconstruction_error(const HermitianMatrix<N> &h, const Spectrum<N> &s) {
    // max_ij | h - V diag(vals) V^dag |
    ComplexMatrix<N> rebuilt;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < N; ++k) {
                acc += s.eigenvectors(i, k) * s.eigenvalues[k] * std::conj(s.eigenvectors(j, k));
            }
            rebuilt(i, j) = acc;
        }
    }
    return (rebuilt - h.mat()).max_abs();
}

template <std::size_t N>
double orthonormality_error(const Spectrum<N> &s) {
    double worst = 0.0;
    for (std::size_t a = 0; a < N; ++a) {
        for (std::size_t b = 0; b < N; ++b) {
            const cplx dot = inner(s.eigenvector(a), s.eigenvector(b));
            worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
    }
    return worst;
}

TEST(Matrix, TensorProductMatchesHandExpansion) {
    ComplexMatrix<2> a;
    a(0, 0) = cplx(1.0, 0.0);
    a(0, 1) = cplx(2.0, 1.0);
    a(1, 0) = cplx(0.0, -3.0);
    a(1, 1) = cplx(4.0, 0.0);
    ComplexMatrix<2> b;
    b(0, 0) = cplx(0.5, 0.0);
    b(0, 1) = cplx(0.0, 1.0);
    b(1, 0) = cplx(1.0, 0.0);
    b(1, 1) = cplx(-2.0, 0.5);

    const ComplexMatrix<4> t = tensor_product(a, b);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const cplx expected = a(i / 2, j / 2) * b(i % 2, j % 2);
            EXPECT_EQ(t(i, j), expected) << "entry " << i << "," << j;
        }
    }
}

TEST(Matrix, PartialTraceInvertsTensorProduct) {
    StreamRng rng(7, 0);
    const HermitianMatrix<2> r1 = sample_density<2>(rng);
    const HermitianMatrix<2> r2 = sample_density<2>(rng);
    const HermitianMatrix<4> joint = tensor_product(r1, r2);

    const HermitianMatrix<2> back1 = partial_trace(joint, Subsystem::B);
    const HermitianMatrix<2> back2 = partial_trace(joint, Subsystem::A);
    EXPECT_LT((back1.mat() - r1.mat()).max_abs(), 1e-14);
    EXPECT_LT((back2.mat() - r2.mat()).max_abs(), 1e-14);
}

TEST(Matrix, ProjectorIsIdempotentAndUnitTrace) {
    StreamRng rng(11, 0);
    ComplexVector<4> v;
    for (std::size_t i = 0; i < 4; ++i) {
        v[i] = cplx(rng.normal(), rng.normal());
    }
    const double n = std::sqrt(std::abs(inner(v, v)));
    for (std::size_t i = 0; i < 4; ++i) {
        v[i] /= n;
    }
    const HermitianMatrix<4> p = projector(v);
    EXPECT_NEAR(p.trace(), 1.0, 1e-14);
    EXPECT_LT((p.mat() * p.mat() - p.mat()).max_abs(), 1e-14);
}

TEST(Matrix, RejectsNonHermitianInput) {
    ComplexMatrix<2> m;
    m(0, 0) = 1.0;
    m(0, 1) = cplx(0.0, 1.0);
    m(1, 0) = cplx(0.0, 1.0);  // should be -i
    m(1, 1) = 0.0;
    EXPECT_THROW(HermitianMatrix<2>{m}, validation_error);
}

TEST(Eig, TwoByTwoPauliX) {
    // Spectra come out descending.
    ComplexMatrix<2> m;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    const auto s = eig_hermitian(HermitianMatrix<2>::trusted(m));
    EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-15);
    EXPECT_NEAR(s.eigenvalues[1], -1.0, 1e-15);
    EXPECT_LT(reconstruction_error(HermitianMatrix<2>::trusted(m), s), 1e-15);
}

TEST(Eig, TwoByTwoComplexOffDiagonal) {
    // [[0.3, 0.1+0.2i], [0.1-0.2i, 0.7]]: eigenvalues 1/2 +- sqrt(0.04+0.05)
    ComplexMatrix<2> m;
    m(0, 0) = 0.3;
    m(0, 1) = cplx(0.1, 0.2);
    m(1, 0) = cplx(0.1, -0.2);
    m(1, 1) = 0.7;
    const auto h = HermitianMatrix<2>::trusted(m);
    const auto s = eig_hermitian(h);
    const double root = std::sqrt(0.04 + 0.05);
    EXPECT_NEAR(s.eigenvalues[0], 0.5 + root, 1e-15);
    EXPECT_NEAR(s.eigenvalues[1], 0.5 - root, 1e-15);
    EXPECT_LT(reconstruction_error(h, s), 1e-15);
    EXPECT_LT(orthonormality_error(s), 1e-14);
}

TEST(Eig, FourByFourDiagonalIsFixedPoint) {
    ComplexMatrix<4> m;
    m(0, 0) = 3.0;
    m(1, 1) = -1.0;
    m(2, 2) = 0.0;
    m(3, 3) = 2.0;
    const auto s = eig_hermitian(HermitianMatrix<4>::trusted(m));
    EXPECT_DOUBLE_EQ(s.eigenvalues[0], 3.0);
    EXPECT_DOUBLE_EQ(s.eigenvalues[1], 2.0);
    EXPECT_DOUBLE_EQ(s.eigenvalues[2], 0.0);
    EXPECT_DOUBLE_EQ(s.eigenvalues[3], -1.0);
}

TEST(Eig, FourByFourKroneckerHasProductSpectrum) {
    // eig(A (x) B) = products of the factors' eigenvalues.
    ComplexMatrix<2> a;
    a(0, 0) = 1.0;
    a(0, 1) = cplx(0.0, 0.5);
    a(1, 0) = cplx(0.0, -0.5);
    a(1, 1) = -1.0;
    ComplexMatrix<2> b;
    b(0, 0) = 2.0;
    b(0, 1) = 0.3;
    b(1, 0) = 0.3;
    b(1, 1) = 1.0;
    const auto ha = HermitianMatrix<2>::trusted(a);
    const auto hb = HermitianMatrix<2>::trusted(b);
    const auto sa = eig_hermitian(ha);
    const auto sb = eig_hermitian(hb);

    std::array<double, 4> expected{};
    std::size_t k = 0;
    for (double va : sa.eigenvalues) {
        for (double vb : sb.eigenvalues) {
            expected[k++] = va * vb;
        }
    }
    std::sort(expected.begin(), expected.end(), std::greater<double>());

    const auto s = eig_hermitian(tensor_product(ha, hb));
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(s.eigenvalues[i], expected[i], 1e-13) << "eigenvalue " << i;
    }
}

TEST(Eig, RandomFourByFourReconstructs) {
    for (std::uint64_t stream = 0; stream < 200; ++stream) {
        StreamRng rng(99, stream);
        const HermitianMatrix<4> h = sample_hermitian<4>(rng);
        const auto s = eig_hermitian(h);
        EXPECT_LT(reconstruction_error(h, s), 1e-12) << "stream " << stream;
        EXPECT_LT(orthonormality_error(s), 1e-13) << "stream " << stream;
        EXPECT_TRUE(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end(),
                                   std::greater<double>()));
        EXPECT_NEAR(s.eigenvalues[0] + s.eigenvalues[1] + s.eigenvalues[2] + s.eigenvalues[3],
                    h.trace(), 1e-12);
    }
}

TEST(Eig, NegativeEigenvalueSumMatchesSpectrum) {
    StreamRng rng(5, 3);
    const HermitianMatrix<4> h = sample_hermitian<4>(rng);
    const auto s = eig_hermitian(h);
    double expected = 0.0;
    for (double v : s.eigenvalues) {
        expected += std::min(0.0, v);
    }
    EXPECT_NEAR(negative_eigenvalue_sum(h), expected, 1e-13);
}

TEST(Eig, DegenerateSpectrumStaysOrthonormal) {
    // I + rank-1: threefold-degenerate eigenvalue 1 plus a simple 2.
    ComplexVector<4> v;
    v[0] = 0.5;
    v[1] = cplx(0.0, 0.5);
    v[2] = -0.5;
    v[3] = cplx(0.5, 0.0);
    const auto h = HermitianMatrix<4>::identity() + projector(v);
    const auto s = eig_hermitian(h);
    EXPECT_NEAR(s.eigenvalues[0], 2.0, 1e-14);
    EXPECT_NEAR(s.eigenvalues[1], 1.0, 1e-14);
    EXPECT_NEAR(s.eigenvalues[2], 1.0, 1e-14);
    EXPECT_NEAR(s.eigenvalues[3], 1.0, 1e-14);
    EXPECT_LT(orthonormality_error(s), 1e-13);
    EXPECT_LT(reconstruction_error(h, s), 1e-13);
}

TEST(Rng, StreamsAreIndependentOfQueryOrder) {
    StreamRng a(42, 0);
    StreamRng b(42, 1);
    const double a0 = a.uniform();
    StreamRng b_again(42, 1);
    const double b0 = b.uniform();
    EXPECT_EQ(b0, b_again.uniform());
    EXPECT_NE(a0, b0);
}

TEST(Rng, UniformStaysInHalfOpenUnitInterval) {
    StreamRng rng(1, 0);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(Rng, NormalMomentsAreSane) {
    StreamRng rng(2026, 0);
    double sum = 0.0, sum_sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sum_sq += x * x;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sum_sq / n, 1.0, 0.02);
}

TEST(Sampling, IndependentPairsAreValidAndReproducible) {
    for (std::uint64_t i = 0; i < 1000; ++i) {
        StreamRng rng(42, i);
        const IndependentPairProblem p = sample_independent_pair(rng);
        // QubitState construction already enforces positivity; double-check
        // the shared-coherence cap that makes both states valid at once.
        const double cap = std::min(p.x1() * (1.0 - p.x1()), p.x2() * (1.0 - p.x2()));
        EXPECT_LE(std::norm(p.z()), cap + 1e-12);
    }
    StreamRng r1(42, 17), r2(42, 17);
    const auto p1 = sample_independent_pair(r1);
    const auto p2 = sample_independent_pair(r2);
    EXPECT_EQ(p1.x1(), p2.x1());
    EXPECT_EQ(p1.x2(), p2.x2());
    EXPECT_EQ(p1.z(), p2.z());
}

TEST(Sampling, DensityMatricesArePositiveUnitTrace) {
    for (std::uint64_t i = 0; i < 200; ++i) {
        StreamRng rng(7, i);
        const HermitianMatrix<4> rho = sample_density<4>(rng);
        EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
        EXPECT_GE(min_eigenvalue(rho), -1e-12);
    }
}

TEST(Sampling, Unitary2IsUnitary) {
    for (std::uint64_t i = 0; i < 200; ++i) {
        StreamRng rng(13, i);
        EXPECT_TRUE(is_unitary(sample_unitary2(rng)));
    }
}

}  // namespace
}  // namespace qht
