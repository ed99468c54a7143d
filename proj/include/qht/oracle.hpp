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
#include <cstdint>
#include <numbers>
#include <vector>

#include "qht/discrimination.hpp"
#include "qht/entangled.hpp"
#include "qht/errors.hpp"
#include "qht/matrix.hpp"
#include "qht/replicas.hpp"
#include "qht/rng.hpp"
#include "qht/sampling.hpp"

// Verification machinery that never touches the optimal-measurement formula:
// a measurement search that only uses mean_error, and a Monte Carlo run of
// the sequential protocol that only samples outcome tables.

namespace qht {

struct SearchConfig {
    std::uint64_t grid_density = 10000;      // directions searched in dim 2 (laid out ~sqrt x sqrt)
    std::uint64_t random_trials = 5000;      // random projector draws in dim 4
    std::uint64_t refine_iterations = 200;   // local pattern-search steps after the random phase
    std::uint64_t seed = 0;

    void validate() const {
        if (grid_density < 1 || random_trials < 1 || refine_iterations < 1) {
            throw validation_error("search config: all counts must be at least 1");
        }
    }
};

template <std::size_t N>
struct BruteForceResult {
    double best_error;
    TwoOutcomeMeasurement<N> best_measurement;
};

namespace detail {

/// Rank-1 projector 1/2 (I + direction . pauli) for polar angle t, azimuth f.
inline HermitianMatrix<2> direction_projector(double t, double f) {
    ComplexMatrix<2> m;
    const double c = std::cos(t);
    const double s = std::sin(t);
    m(0, 0) = 0.5 * (1.0 + c);
    m(1, 1) = 0.5 * (1.0 - c);
    m(0, 1) = 0.5 * s * std::polar(1.0, -f);
    m(1, 0) = std::conj(m(0, 1));
    return HermitianMatrix<2>::trusted(m);
}

/// Traceless unit-direction Hermitian (eigenvalues +1 and -1).
inline HermitianMatrix<2> direction_axis(double t, double f) {
    ComplexMatrix<2> m;
    m(0, 0) = std::cos(t);
    m(1, 1) = -std::cos(t);
    m(0, 1) = std::sin(t) * std::polar(1.0, -f);
    m(1, 0) = std::conj(m(0, 1));
    return HermitianMatrix<2>::trusted(m);
}

template <std::size_t N>
inline void consider(const Hypotheses<N> &h, const HermitianMatrix<N> &pi2, double &best_error,
                     TwoOutcomeMeasurement<N> &best_measurement) {
    const auto m = TwoOutcomeMeasurement<N>::trusted(HermitianMatrix<N>::identity() - pi2, pi2);
    const double err = mean_error(h, m);
    if (err < best_error) {
        best_error = err;
        best_measurement = m;
    }
}

/// Gram-Schmidt with redraw: near-dependent vectors are replaced by fresh
/// Gaussian draws so the result is always a proper orthonormal frame.
template <std::size_t N>
inline void orthonormalize_frame(std::vector<ComplexVector<N>> &frame, StreamRng &rng) {
    for (std::size_t i = 0; i < frame.size(); ++i) {
        for (int attempt = 0;; ++attempt) {
            if (attempt > 100) {
                throw numeric_error("frame orthonormalization failed to find an independent vector");
            }
            for (std::size_t j = 0; j < i; ++j) {
                const cplx overlap = inner(frame[j], frame[i]);
                for (std::size_t r = 0; r < N; ++r) {
                    frame[i][r] -= overlap * frame[j][r];
                }
            }
            const double n = frame[i].norm();
            if (n > 1e-8) {
                frame[i] *= 1.0 / n;
                break;
            }
            for (std::size_t r = 0; r < N; ++r) {
                frame[i][r] = cplx(rng.normal(), rng.normal());
            }
        }
    }
}

template <std::size_t N>
inline std::vector<ComplexVector<N>> sample_frame(StreamRng &rng, std::size_t rank) {
    std::vector<ComplexVector<N>> frame(rank);
    for (auto &v : frame) {
        for (std::size_t r = 0; r < N; ++r) {
            v[r] = cplx(rng.normal(), rng.normal());
        }
    }
    orthonormalize_frame(frame, rng);
    return frame;
}

template <std::size_t N>
inline HermitianMatrix<N> frame_projector(const std::vector<ComplexVector<N>> &frame) {
    ComplexMatrix<N> sum;
    for (const auto &v : frame) {
        sum += outer(v, v);
    }
    return HermitianMatrix<N>::trusted(sum);
}

template <std::size_t N>
inline void check_search_floor(const Hypotheses<N> &h, double best_error) {
    if (best_error < helstrom_error(h) - 1e-10) {
        throw numeric_error("measurement search went below the analytic optimum");
    }
}

}  // namespace detail

/// Search qubit measurements exhaustively: both trivial guesses, a grid of
/// projective tests over the whole direction sphere, and a coarse sweep of
/// genuinely non-projective two-outcome tests pi2 = a*I + b*axis.
inline BruteForceResult<2> brute_force_min_error(const Hypotheses<2> &h, const SearchConfig &cfg) {
    cfg.validate();
    double best = h.prior2();  // pi2 = 0: always decide hypothesis 1
    auto best_m = TwoOutcomeMeasurement<2>::trusted(HermitianMatrix<2>::identity(), HermitianMatrix<2>());
    detail::consider(h, HermitianMatrix<2>::identity(), best, best_m);

    const std::uint64_t side =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(cfg.grid_density)))));
    for (std::uint64_t i = 0; i < side; ++i) {
        const double t = side == 1 ? 0.5 * std::numbers::pi
                                   : std::numbers::pi * static_cast<double>(i) / static_cast<double>(side - 1);
        for (std::uint64_t j = 0; j < side; ++j) {
            const double f = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(side);
            detail::consider(h, detail::direction_projector(t, f), best, best_m);
        }
    }

    // Non-projective layer, deliberately coarse: mixing the identity in can
    // never help for a binary minimum-error test, so this only guards against
    // that expectation being wrong in the implementation.
    for (int ai = 1; ai <= 9; ++ai) {
        const double a = 0.1 * ai;
        const double b_cap = std::min(a, 1.0 - a);
        for (int bi = 1; bi <= 4; ++bi) {
            const double b = 0.25 * bi * b_cap;
            for (int ti = 0; ti < 12; ++ti) {
                const double t = std::numbers::pi * (ti + 0.5) / 12.0;
                for (int fi = 0; fi < 12; ++fi) {
                    const double f = 2.0 * std::numbers::pi * fi / 12.0;
                    detail::consider(
                        h, HermitianMatrix<2>::identity().scaled(a) + detail::direction_axis(t, f).scaled(b),
                        best, best_m);
                }
            }
        }
    }

    detail::check_search_floor(h, best);
    return {best, best_m};
}

/// Search two-qubit measurements: random projectors of every rank from
/// seed-derived streams, then derivative-free refinement of the best frame by
/// Gaussian perturbation with step halving (stops at step 1e-6).
inline BruteForceResult<4> brute_force_min_error(const Hypotheses<4> &h, const SearchConfig &cfg) {
    cfg.validate();
    double best = h.prior2();
    auto best_m = TwoOutcomeMeasurement<4>::trusted(HermitianMatrix<4>::identity(), HermitianMatrix<4>());
    detail::consider(h, HermitianMatrix<4>::identity(), best, best_m);

    std::vector<ComplexVector<4>> best_frame;
    for (std::uint64_t trial = 0; trial < cfg.random_trials; ++trial) {
        StreamRng rng(cfg.seed, trial);
        const std::size_t rank = static_cast<std::size_t>(rng.index(5));
        if (rank == 0 || rank == 4) {
            continue;  // both trivial projectors are already in
        }
        auto frame = detail::sample_frame<4>(rng, rank);
        const double before = best;
        detail::consider(h, detail::frame_projector(frame), best, best_m);
        if (best < before) {
            best_frame = std::move(frame);
        }
    }

    if (!best_frame.empty()) {
        StreamRng rng(cfg.seed, cfg.random_trials + 0x51ED);  // refinement draws its own stream
        double step = 0.1;
        for (std::uint64_t it = 0; it < cfg.refine_iterations && step >= 1e-6; ++it) {
            auto candidate = best_frame;
            for (auto &v : candidate) {
                for (std::size_t r = 0; r < 4; ++r) {
                    v[r] += step * cplx(rng.normal(), rng.normal());
                }
            }
            detail::orthonormalize_frame(candidate, rng);
            const double before = best;
            detail::consider(h, detail::frame_projector(candidate), best, best_m);
            if (best < before) {
                best_frame = std::move(candidate);
            } else {
                step *= 0.5;
            }
        }
    }

    detail::check_search_floor(h, best);
    return {best, best_m};
}

struct SimulationResult {
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double empirical_error = 0.0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

/// Outcome tables for sampling the two-stage protocol. p_stage1[k][s] is the
/// chance hypothesis k+1 produces first outcome s+1; p_decide[k][s][j] the
/// chance the second stage then reports j+1.
struct ProtocolSampler {
    std::array<std::array<double, 2>, 2> p_stage1{};
    std::array<std::array<std::array<double, 2>, 2>, 2> p_decide{};
};

inline ProtocolSampler build_sampler(const BranchSet &set) {
    ProtocolSampler t;
    for (int s = 0; s < 2; ++s) {
        const BranchInput &b = set.branches[s];
        t.p_stage1[0][s] = b.p_given_1;
        t.p_stage1[1][s] = b.p_given_2;
        const double p_total = 0.5 * (b.p_given_1 + b.p_given_2);
        if (p_total <= 0.0) {
            // Unreachable branch; decide 1 by convention.
            t.p_decide[0][s] = {1.0, 0.0};
            t.p_decide[1][s] = {1.0, 0.0};
            continue;
        }
        const double posterior1 = 0.5 * b.p_given_1 / p_total;
        const auto m = helstrom_measurement(Hypotheses<2>(b.rho1_cond, b.rho2_cond, posterior1));
        for (int k = 0; k < 2; ++k) {
            const HermitianMatrix<2> &rho = (k == 0) ? b.rho1_cond : b.rho2_cond;
            for (int j = 0; j < 2; ++j) {
                t.p_decide[k][s][j] = std::clamp(trace_product(rho, m.pi(j + 1)), 0.0, 1.0);
            }
        }
    }
    return t;
}

/// Per trial, from its own (seed, trial) stream: draw the true hypothesis,
/// the first-stage outcome, and the final decision. Three uniforms, always.
inline SimulationResult run_protocol_trials(const ProtocolSampler &t, std::uint64_t trials,
                                            std::uint64_t seed) {
    if (trials < 1) {
        throw validation_error("simulation: trials must be at least 1");
    }
    std::uint64_t errors = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        StreamRng rng(seed, trial);
        const int k = rng.uniform() < 0.5 ? 0 : 1;
        const int s = rng.uniform() < t.p_stage1[k][0] ? 0 : 1;
        const int j = rng.uniform() < t.p_decide[k][s][0] ? 0 : 1;
        errors += (j != k) ? 1 : 0;
    }
    SimulationResult r;
    r.trials = trials;
    r.errors = errors;
    r.empirical_error = static_cast<double>(errors) / static_cast<double>(trials);
    r.std_error = std::sqrt(r.empirical_error * (1.0 - r.empirical_error) / static_cast<double>(trials));
    r.seed = seed;
    return r;
}

}  // namespace detail

inline SimulationResult simulate_sequential(const IndependentPairProblem &p, std::uint64_t trials,
                                            std::uint64_t seed) {
    return detail::run_protocol_trials(detail::build_sampler(detail::independent_branches(p)), trials, seed);
}

inline SimulationResult simulate_sequential(const EntangledProblem &e, std::uint64_t trials,
                                            std::uint64_t seed) {
    return detail::run_protocol_trials(detail::build_sampler(detail::entangled_branches(e)), trials, seed);
}

inline IndependentPairProblem random_independent_problem(std::uint64_t seed, std::uint64_t stream = 0) {
    StreamRng rng(seed, stream);
    return sample_independent_pair(rng);
}

inline CanonicalizedEntangled random_entangled_problem(std::uint64_t seed, std::uint64_t stream = 0) {
    StreamRng rng(seed, stream);
    return sample_entangled_pair(rng);
}

}  // namespace qht
