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

#include <cmath>
#include <numbers>

#include "qht/discrimination.hpp"
#include "qht/entangled.hpp"
#include "qht/matrix.hpp"
#include "qht/replicas.hpp"
#include "qht/rng.hpp"

// Random instance generators used by every audit and randomized test. The
// draw order from the stream is part of each sampler's contract (it is what
// makes a (seed, stream) pair reproduce an instance bit for bit), so changing
// it is a breaking change.

namespace qht {

/// Independent-pair measure: x1, x2 uniform on [0,1]; then the phase of z
/// uniform on [0, 2*pi); then |z| uniform on [0, sqrt(min(x1(1-x1),
/// x2(1-x2)))], the largest coherence both states admit. Four uniforms.
inline IndependentPairProblem sample_independent_pair(StreamRng &rng) {
    const double x1 = rng.uniform();
    const double x2 = rng.uniform();
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    const double z_cap = std::sqrt(std::min(x1 * (1.0 - x1), x2 * (1.0 - x2)));
    const double z_mag = rng.uniform() * z_cap;
    return IndependentPairProblem(x1, x2, std::polar(z_mag, phase));
}

namespace detail {

/// One raw symmetric pair state: six normals in the order alpha.re, alpha.im,
/// beta.re, beta.im, gamma.re, gamma.im, normalized with the doubled beta
/// weight.
inline PairPureState sample_raw_pair_state(StreamRng &rng) {
    const cplx a(rng.normal(), rng.normal());
    const cplx b(rng.normal(), rng.normal());
    const cplx g(rng.normal(), rng.normal());
    const double n = std::sqrt(std::norm(a) + 2.0 * std::norm(b) + std::norm(g));
    return PairPureState(a / n, b / n, g / n);
}

}  // namespace detail

/// Entangled measure: both states drawn as in sample_raw_pair_state (state 1
/// first, twelve normals total), then rotated into the shared diagonalizing
/// basis.
inline CanonicalizedEntangled sample_entangled_pair(StreamRng &rng) {
    const PairPureState psi1 = detail::sample_raw_pair_state(rng);
    const PairPureState psi2 = detail::sample_raw_pair_state(rng);
    return validate_or_canonicalize(psi1, psi2, CanonicalizationMode::canonicalize);
}

/// Hypotheses that are products of identical one-qubit pure states: per state
/// four normals (qubit amplitude a, then b, re before im), normalized, giving
/// amplitudes (a^2, ab, b^2); canonicalized afterwards like any other pair.
inline CanonicalizedEntangled sample_product_pair(StreamRng &rng) {
    PairPureState states[2] = {PairPureState(1, 0, 0), PairPureState(1, 0, 0)};
    for (auto &psi : states) {
        const cplx a(rng.normal(), rng.normal());
        const cplx b(rng.normal(), rng.normal());
        const double n = std::sqrt(std::norm(a) + std::norm(b));
        const cplx a0 = a / n;
        const cplx b0 = b / n;
        psi = PairPureState(a0 * a0, a0 * b0, b0 * b0);
    }
    return validate_or_canonicalize(states[0], states[1], CanonicalizationMode::canonicalize);
}

/// Family with the two outer amplitudes exchanged between the hypotheses:
/// alpha1=gamma2, alpha2=gamma1, shared beta, all real. Three normals
/// (alpha1, beta, gamma1), normalized; the exchange makes the second state's
/// normalization automatic.
inline EntangledProblem sample_swap_symmetric(StreamRng &rng) {
    const double a = rng.normal();
    const double b = rng.normal();
    const double g = rng.normal();
    const double n = std::sqrt(a * a + 2.0 * b * b + g * g);
    const PairPureState psi1(a / n, b / n, g / n);
    const PairPureState psi2(g / n, b / n, a / n);
    return EntangledProblem(psi1, psi2);
}

/// Family with gamma_k = -alpha_k, all real, betas free: two normals per
/// state (alpha, beta; state 1 first), each state normalized on its own.
inline EntangledProblem sample_antisymmetric(StreamRng &rng) {
    PairPureState states[2] = {PairPureState(1, 0, 0), PairPureState(1, 0, 0)};
    for (auto &psi : states) {
        const double a = rng.normal();
        const double b = rng.normal();
        const double n = std::sqrt(2.0 * a * a + 2.0 * b * b);
        psi = PairPureState(a / n, b / n, -a / n);
    }
    return EntangledProblem(states[0], states[1]);
}

/// Family with gamma_k = alpha_k and matching alpha*beta products. On the
/// normalized slice alpha = cos(t)/sqrt(2), beta = sin(t)/sqrt(2), the
/// product constraint ties the two angles by t2 = pi/2 - t1. One uniform.
inline EntangledProblem sample_symmetric_matched(StreamRng &rng) {
    const double t1 = 2.0 * std::numbers::pi * rng.uniform();
    const double t2 = 0.5 * std::numbers::pi - t1;
    const double inv_rt2 = std::numbers::sqrt2 / 2.0;
    const PairPureState psi1(std::cos(t1) * inv_rt2, std::sin(t1) * inv_rt2, std::cos(t1) * inv_rt2);
    const PairPureState psi2(std::cos(t2) * inv_rt2, std::sin(t2) * inv_rt2, std::cos(t2) * inv_rt2);
    return EntangledProblem(psi1, psi2);
}

/// Random density matrix: an N x N standard complex Gaussian matrix G gives
/// G G^dagger / tr(G G^dagger). Draw order: G row-major, re before im.
template <std::size_t N>
inline HermitianMatrix<N> sample_density(StreamRng &rng) {
    ComplexMatrix<N> g;
    for (std::size_t r = 0; r < N; ++r) {
        for (std::size_t c = 0; c < N; ++c) {
            g(r, c) = cplx(rng.normal(), rng.normal());
        }
    }
    const ComplexMatrix<N> gg = g * g.adjoint();
    return HermitianMatrix<N>::trusted(gg * (1.0 / gg.trace().real()));
}

/// Random Hermitian matrix with Gaussian entries (not a state; used to
/// exercise the eigensolver off the density-matrix manifold).
template <std::size_t N>
inline HermitianMatrix<N> sample_hermitian(StreamRng &rng) {
    ComplexMatrix<N> m;
    for (std::size_t r = 0; r < N; ++r) {
        m(r, r) = rng.normal();
        for (std::size_t c = r + 1; c < N; ++c) {
            m(r, c) = cplx(rng.normal(), rng.normal());
            m(c, r) = std::conj(m(r, c));
        }
    }
    return HermitianMatrix<N>::trusted(m);
}

/// Haar-ish random one-qubit unitary via Gram-Schmidt on Gaussian columns.
inline ComplexMatrix<2> sample_unitary2(StreamRng &rng) {
    while (true) {
        ComplexVector<2> c0, c1;
        for (std::size_t i = 0; i < 2; ++i) {
            c0[i] = cplx(rng.normal(), rng.normal());
            c1[i] = cplx(rng.normal(), rng.normal());
        }
        const double n0 = c0.norm();
        if (n0 < 1e-6) {
            continue;
        }
        c0 *= 1.0 / n0;
        const cplx overlap = inner(c0, c1);
        c1[0] -= overlap * c0[0];
        c1[1] -= overlap * c0[1];
        const double n1 = c1.norm();
        if (n1 < 1e-6) {
            continue;
        }
        c1 *= 1.0 / n1;
        ComplexMatrix<2> u;
        u(0, 0) = c0[0];
        u(1, 0) = c0[1];
        u(0, 1) = c1[0];
        u(1, 1) = c1[1];
        return u;
    }
}

/// Random two-outcome qubit measurement, generally non-projective: random
/// eigenbasis, eigenvalues of the second operator uniform on [0,1].
inline TwoOutcomeMeasurement<2> sample_measurement2(StreamRng &rng) {
    const ComplexMatrix<2> u = sample_unitary2(rng);
    const double e0 = rng.uniform();
    const double e1 = rng.uniform();
    ComplexVector<2> v0, v1;
    for (std::size_t i = 0; i < 2; ++i) {
        v0[i] = u(i, 0);
        v1[i] = u(i, 1);
    }
    const HermitianMatrix<2> pi2 =
        projector(v0).scaled(e0) + projector(v1).scaled(e1);
    return TwoOutcomeMeasurement<2>::trusted(HermitianMatrix<2>::identity() - pi2, pi2);
}

}  // namespace qht
