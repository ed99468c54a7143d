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
#include <numeric>

#include "qht/errors.hpp"
#include "qht/matrix.hpp"

namespace qht {

constexpr double kEigDegeneracyTol = 1e-12;
constexpr double kEigPhaseTol = 1e-12;
constexpr double kJacobiTarget = 1e-14;
constexpr double kJacobiAcceptable = 1e-12;
constexpr int kJacobiMaxSweeps = 100;

/// Eigendecomposition of a Hermitian operator. Eigenvalues are sorted in
/// descending order; column i of `eigenvectors` is the unit eigenvector for
/// `eigenvalues[i]`, with its first non-negligible component made real and
/// positive so repeated runs produce identical output.
template <std::size_t N>
struct Spectrum {
    std::array<double, N> eigenvalues{};
    ComplexMatrix<N> eigenvectors;

    ComplexVector<N> eigenvector(std::size_t i) const {
        ComplexVector<N> v;
        for (std::size_t r = 0; r < N; ++r) {
            v[r] = eigenvectors(r, i);
        }
        return v;
    }
};

namespace detail {

/// Fix the overall phase so the first component above threshold is real
/// positive, then renormalize.
template <std::size_t N>
inline void canonicalize_column(ComplexMatrix<N> &vecs, std::size_t col) {
    cplx pivot = 0.0;
    for (std::size_t r = 0; r < N; ++r) {
        if (std::abs(vecs(r, col)) > kEigPhaseTol) {
            pivot = vecs(r, col);
            break;
        }
    }
    double norm_sq = 0.0;
    for (std::size_t r = 0; r < N; ++r) {
        norm_sq += std::norm(vecs(r, col));
    }
    if (norm_sq <= 0.0) {
        return;
    }
    cplx factor = 1.0 / std::sqrt(norm_sq);
    if (std::abs(pivot) > 0.0) {
        factor *= std::conj(pivot) / std::abs(pivot);
    }
    for (std::size_t r = 0; r < N; ++r) {
        vecs(r, col) *= factor;
    }
}

/// Component-wise (re, im) comparison used to order eigenvectors inside a
/// degenerate cluster. Returns true if column a should precede column b.
template <std::size_t N>
inline bool column_lex_greater(const ComplexMatrix<N> &vecs, std::size_t a, std::size_t b) {
    for (std::size_t r = 0; r < N; ++r) {
        double ra = vecs(r, a).real(), rb = vecs(r, b).real();
        if (ra != rb) {
            return ra > rb;
        }
        double ia = vecs(r, a).imag(), ib = vecs(r, b).imag();
        if (ia != ib) {
            return ia > ib;
        }
    }
    return false;
}

/// Sort eigenpairs by descending eigenvalue; inside clusters of eigenvalues
/// closer than the degeneracy threshold, order by the vector comparison so
/// that numerically equal eigenvalues still yield a deterministic basis.
template <std::size_t N>
inline Spectrum<N> ordered(std::array<double, N> vals, const ComplexMatrix<N> &vecs) {
    std::array<std::size_t, N> idx{};
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });

    std::size_t run_begin = 0;
    while (run_begin < N) {
        std::size_t run_end = run_begin + 1;
        while (run_end < N && vals[idx[run_end - 1]] - vals[idx[run_end]] < kEigDegeneracyTol) {
            ++run_end;
        }
        std::stable_sort(idx.begin() + run_begin, idx.begin() + run_end,
                         [&](std::size_t a, std::size_t b) { return column_lex_greater(vecs, a, b); });
        run_begin = run_end;
    }

    Spectrum<N> s;
    for (std::size_t i = 0; i < N; ++i) {
        s.eigenvalues[i] = vals[idx[i]];
        for (std::size_t r = 0; r < N; ++r) {
            s.eigenvectors(r, i) = vecs(r, idx[i]);
        }
    }
    return s;
}

inline Spectrum<2> eig2(const HermitianMatrix<2> &h) {
    const double a = h.diag(0);
    const double c = h.diag(1);
    const cplx b = h(0, 1);
    const double mid = 0.5 * (a + c);
    const double r = 0.5 * (a - c);
    const double d = std::hypot(r, std::abs(b));

    std::array<double, 2> vals = {mid + d, mid - d};
    ComplexMatrix<2> vecs;
    if (d <= 0.0) {
        vecs = ComplexMatrix<2>::identity();
    } else {
        // Two algebraically equivalent forms of the leading eigenvector; pick
        // the one whose norm stays away from zero.
        cplx v0, v1;
        if (r >= 0.0) {
            v0 = d + r;
            v1 = std::conj(b);
        } else {
            v0 = b;
            v1 = d - r;
        }
        vecs(0, 0) = v0;
        vecs(1, 0) = v1;
        // The orthogonal complement is the other eigenvector for any
        // Hermitian 2x2.
        vecs(0, 1) = -std::conj(v1);
        vecs(1, 1) = std::conj(v0);
    }
    canonicalize_column(vecs, 0);
    canonicalize_column(vecs, 1);
    return ordered(vals, vecs);
}

template <std::size_t N>
inline double off_diagonal_norm(const ComplexMatrix<N> &m) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            if (i != j) {
                s += std::norm(m(i, j));
            }
        }
    }
    return std::sqrt(s);
}

/// Cyclic Jacobi with complex plane rotations. Each pivot (p, q) is
/// annihilated by the unitary R with R_pp = R_qq = c, R_pq = s*ph,
/// R_qp = -s*conj(ph), where ph is the phase of a_pq and tan(2 theta) solves
/// c*s*(a_pp - a_qq) + |a_pq|*(c^2 - s^2) = 0.
template <std::size_t N>
inline Spectrum<N> eig_jacobi(const HermitianMatrix<N> &h) {
    ComplexMatrix<N> a = h.mat();
    ComplexMatrix<N> v = ComplexMatrix<N>::identity();
    const double scale = std::max(1.0, a.max_abs());

    int sweep = 0;
    while (off_diagonal_norm(a) > kJacobiTarget * scale) {
        if (++sweep > kJacobiMaxSweeps) {
            if (off_diagonal_norm(a) > kJacobiAcceptable * scale) {
                throw numeric_error("eigensolver failed to converge");
            }
            break;
        }
        for (std::size_t p = 0; p < N - 1; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const double beta = std::abs(a(p, q));
                if (beta <= 1e-300) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const cplx ph = a(p, q) / beta;
                // Annihilating a_pq needs t = s/c solving t^2 - 2*tau*t - 1 = 0;
                // of its two roots, the one with |t| <= 1 is -sign(tau)/(|tau| + sqrt(1+tau^2)).
                const double tau = (a(p, p).real() - a(q, q).real()) / (2.0 * beta);
                const double t =
                    (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                a(p, p) = c * c * app + s * s * aqq - 2.0 * c * s * beta;
                a(q, q) = s * s * app + c * c * aqq + 2.0 * c * s * beta;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < N; ++i) {
                    if (i == p || i == q) {
                        continue;
                    }
                    const cplx aip = a(i, p);
                    const cplx aiq = a(i, q);
                    a(i, p) = c * aip - s * std::conj(ph) * aiq;
                    a(i, q) = s * ph * aip + c * aiq;
                    a(p, i) = std::conj(a(i, p));
                    a(q, i) = std::conj(a(i, q));
                }
                for (std::size_t i = 0; i < N; ++i) {
                    const cplx vip = v(i, p);
                    const cplx viq = v(i, q);
                    v(i, p) = c * vip - s * std::conj(ph) * viq;
                    v(i, q) = s * ph * vip + c * viq;
                }
            }
        }
    }

    std::array<double, N> vals{};
    for (std::size_t i = 0; i < N; ++i) {
        vals[i] = a(i, i).real();
    }
    for (std::size_t i = 0; i < N; ++i) {
        canonicalize_column(v, i);
    }
    return ordered(vals, v);
}

}  // namespace detail

template <std::size_t N>
inline Spectrum<N> eig_hermitian(const HermitianMatrix<N> &h) {
    if (!h.mat().all_finite()) {
        throw numeric_error("eigensolver input has non-finite entries");
    }
    if constexpr (N == 2) {
        return detail::eig2(h);
    } else {
        return detail::eig_jacobi(h);
    }
}

template <std::size_t N>
inline double min_eigenvalue(const HermitianMatrix<N> &h) {
    return eig_hermitian(h).eigenvalues[N - 1];
}

template <std::size_t N>
inline bool is_positive_semidefinite(const HermitianMatrix<N> &h, double tol = 1e-12) {
    return min_eigenvalue(h) >= -tol;
}

/// Sum of the negative part of the spectrum: sum_i min(0, lambda_i).
template <std::size_t N>
inline double negative_eigenvalue_sum(const HermitianMatrix<N> &h) {
    const auto s = eig_hermitian(h);
    double total = 0.0;
    for (double lam : s.eigenvalues) {
        total += std::min(0.0, lam);
    }
    return total;
}

}  // namespace qht
