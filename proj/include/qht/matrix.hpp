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
#include <complex>
#include <cstddef>
#include <string>

#include "qht/errors.hpp"

namespace qht {

using cplx = std::complex<double>;

constexpr double kHermiticityTol = 1e-12;
constexpr double kNormalizationTol = 1e-12;
constexpr double kUnitarityTol = 1e-12;

inline bool is_finite(cplx v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

/// Dense N x N complex matrix, row-major, value semantics. N is 2 or 4
/// everywhere in this library.
template <std::size_t N>
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    static ComplexMatrix identity() {
        ComplexMatrix m;
        for (std::size_t i = 0; i < N; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    cplx &operator()(std::size_t r, std::size_t c) {
        return e_[r * N + c];
    }
    const cplx &operator()(std::size_t r, std::size_t c) const {
        return e_[r * N + c];
    }

    ComplexMatrix &operator+=(const ComplexMatrix &o) {
        for (std::size_t i = 0; i < N * N; ++i) {
            e_[i] += o.e_[i];
        }
        return *this;
    }
    ComplexMatrix &operator-=(const ComplexMatrix &o) {
        for (std::size_t i = 0; i < N * N; ++i) {
            e_[i] -= o.e_[i];
        }
        return *this;
    }
    ComplexMatrix &operator*=(cplx s) {
        for (auto &v : e_) {
            v *= s;
        }
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) {
        return a += b;
    }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) {
        return a -= b;
    }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix m) {
        return m *= s;
    }
    friend ComplexMatrix operator*(ComplexMatrix m, cplx s) {
        return m *= s;
    }

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
        ComplexMatrix r;
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t k = 0; k < N; ++k) {
                cplx aik = a(i, k);
                for (std::size_t j = 0; j < N; ++j) {
                    r(i, j) += aik * b(k, j);
                }
            }
        }
        return r;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix r;
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = 0; j < N; ++j) {
                r(i, j) = std::conj((*this)(j, i));
            }
        }
        return r;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto &v : e_) {
            m = std::max(m, std::abs(v));
        }
        return m;
    }

    bool all_finite() const {
        for (const auto &v : e_) {
            if (!is_finite(v)) {
                return false;
            }
        }
        return true;
    }

    bool operator==(const ComplexMatrix &o) const {
        return e_ == o.e_;
    }

  private:
    std::array<cplx, N * N> e_{};
};

template <std::size_t N>
class ComplexVector {
  public:
    ComplexVector() = default;

    cplx &operator[](std::size_t i) {
        return e_[i];
    }
    const cplx &operator[](std::size_t i) const {
        return e_[i];
    }

    double norm_squared() const {
        double s = 0.0;
        for (const auto &v : e_) {
            s += std::norm(v);
        }
        return s;
    }
    double norm() const {
        return std::sqrt(norm_squared());
    }

    bool all_finite() const {
        for (const auto &v : e_) {
            if (!is_finite(v)) {
                return false;
            }
        }
        return true;
    }

    ComplexVector &operator*=(cplx s) {
        for (auto &v : e_) {
            v *= s;
        }
        return *this;
    }

    bool operator==(const ComplexVector &o) const {
        return e_ == o.e_;
    }

  private:
    std::array<cplx, N> e_{};
};

/// <a|b>, conjugate-linear in the first argument.
template <std::size_t N>
inline cplx inner(const ComplexVector<N> &a, const ComplexVector<N> &b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

template <std::size_t N>
inline ComplexVector<N> operator*(const ComplexMatrix<N> &m, const ComplexVector<N> &v) {
    ComplexVector<N> r;
    for (std::size_t i = 0; i < N; ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            s += m(i, j) * v[j];
        }
        r[i] = s;
    }
    return r;
}

/// Hermitian N x N operator. Construction symmetrizes (averages with the
/// conjugate transpose), so the stored matrix is exactly Hermitian; the
/// checked constructor rejects inputs whose skew part exceeds 1e-12.
template <std::size_t N>
class HermitianMatrix {
  public:
    HermitianMatrix() = default;

    explicit HermitianMatrix(const ComplexMatrix<N> &m) {
        if (!m.all_finite()) {
            throw validation_error("hermitian operator: non-finite entry");
        }
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = 0; j < N; ++j) {
                if (std::abs(m(i, j) - std::conj(m(j, i))) > 2 * kHermiticityTol) {
                    throw validation_error("hermitian operator: entry (" + std::to_string(i) + "," +
                                           std::to_string(j) + ") is not the conjugate of its transpose");
                }
            }
        }
        m_ = symmetrized(m);
    }

    /// For matrices Hermitian by construction (vv^dag, Kronecker products of
    /// Hermitians, real-linear combinations). Still symmetrizes.
    static HermitianMatrix trusted(const ComplexMatrix<N> &m) {
        HermitianMatrix h;
        h.m_ = symmetrized(m);
        return h;
    }

    static HermitianMatrix identity() {
        return trusted(ComplexMatrix<N>::identity());
    }

    const ComplexMatrix<N> &mat() const {
        return m_;
    }
    cplx operator()(std::size_t r, std::size_t c) const {
        return m_(r, c);
    }
    double diag(std::size_t i) const {
        return m_(i, i).real();
    }
    double trace() const {
        return m_.trace().real();
    }

    HermitianMatrix scaled(double s) const {
        return trusted(cplx(s, 0.0) * m_);
    }
    friend HermitianMatrix operator+(const HermitianMatrix &a, const HermitianMatrix &b) {
        return trusted(a.m_ + b.m_);
    }
    friend HermitianMatrix operator-(const HermitianMatrix &a, const HermitianMatrix &b) {
        return trusted(a.m_ - b.m_);
    }

    bool operator==(const HermitianMatrix &o) const {
        return m_ == o.m_;
    }

  private:
    static ComplexMatrix<N> symmetrized(const ComplexMatrix<N> &m) {
        ComplexMatrix<N> r;
        for (std::size_t i = 0; i < N; ++i) {
            r(i, i) = cplx(m(i, i).real(), 0.0);
            for (std::size_t j = i + 1; j < N; ++j) {
                cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
                r(i, j) = v;
                r(j, i) = std::conj(v);
            }
        }
        return r;
    }

    ComplexMatrix<N> m_;
};

/// Unit-norm pure state. Squared norm must be 1 within 1e-12.
template <std::size_t N>
class StateVector {
  public:
    explicit StateVector(const ComplexVector<N> &amplitudes) : v_(amplitudes) {
        if (!v_.all_finite()) {
            throw validation_error("state vector: non-finite amplitude");
        }
        if (std::abs(v_.norm_squared() - 1.0) > kNormalizationTol) {
            throw validation_error("state vector: squared norm deviates from 1 by more than 1e-12");
        }
    }

    const ComplexVector<N> &amplitudes() const {
        return v_;
    }
    cplx operator[](std::size_t i) const {
        return v_[i];
    }

  private:
    ComplexVector<N> v_;
};

/// |a><b|
template <std::size_t N>
inline ComplexMatrix<N> outer(const ComplexVector<N> &a, const ComplexVector<N> &b) {
    ComplexMatrix<N> m;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            m(i, j) = a[i] * std::conj(b[j]);
        }
    }
    return m;
}

/// Rank-one projector |v><v|.
template <std::size_t N>
inline HermitianMatrix<N> projector(const ComplexVector<N> &v) {
    return HermitianMatrix<N>::trusted(outer(v, v));
}

template <std::size_t N>
inline HermitianMatrix<N> projector(const StateVector<N> &v) {
    return projector(v.amplitudes());
}

/// Re tr(A B). Exact-real for Hermitian A, B; the imaginary part cancels.
template <std::size_t N>
inline double trace_product(const HermitianMatrix<N> &a, const HermitianMatrix<N> &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            cplx p = a(i, j) * b(j, i);
            s += p.real();
        }
    }
    return s;
}

/// Kronecker product; index convention |a>_A |b>_B -> 2a + b.
inline ComplexMatrix<4> tensor_product(const ComplexMatrix<2> &a, const ComplexMatrix<2> &b) {
    ComplexMatrix<4> r;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t k = 0; k < 2; ++k) {
                for (std::size_t l = 0; l < 2; ++l) {
                    r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return r;
}

inline HermitianMatrix<4> tensor_product(const HermitianMatrix<2> &a, const HermitianMatrix<2> &b) {
    return HermitianMatrix<4>::trusted(tensor_product(a.mat(), b.mat()));
}

inline ComplexVector<4> tensor_product(const ComplexVector<2> &a, const ComplexVector<2> &b) {
    ComplexVector<4> r;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t k = 0; k < 2; ++k) {
            r[2 * i + k] = a[i] * b[k];
        }
    }
    return r;
}

/// Which tensor factor to trace out.
enum class Subsystem {
    A,
    B,
};

/// Trace out one subsystem of a two-qubit operator.
inline HermitianMatrix<2> partial_trace(const HermitianMatrix<4> &m, Subsystem traced_out) {
    ComplexMatrix<2> r;
    if (traced_out == Subsystem::B) {
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                r(i, j) = m(2 * i + 0, 2 * j + 0) + m(2 * i + 1, 2 * j + 1);
            }
        }
    } else {
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                r(i, j) = m(0 + i, 0 + j) + m(2 + i, 2 + j);
            }
        }
    }
    return HermitianMatrix<2>::trusted(r);
}

inline bool is_unitary(const ComplexMatrix<2> &u, double tol = kUnitarityTol) {
    return (u.adjoint() * u - ComplexMatrix<2>::identity()).max_abs() <= tol;
}

/// (U (x) U) psi for a shared single-qubit basis change U.
inline StateVector<4> apply_local_basis_change(const ComplexMatrix<2> &u, const StateVector<4> &psi) {
    if (!u.all_finite() || !is_unitary(u)) {
        throw validation_error("local basis change: matrix is not unitary within 1e-12");
    }
    return StateVector<4>(tensor_product(u, u) * psi.amplitudes());
}

}  // namespace qht
