// Copyright 2026 The bornlab Authors
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

#include "bornlab/quantum.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gtest/gtest.h"

#include "bornlab/errors.hpp"

using namespace bornlab;

namespace {

const double kHalf = 1.0 / std::sqrt(2.0);

std::vector<ProbabilityRule> rules_in_scope() {
    return {ProbabilityRule::born(),
            ProbabilityRule::power(1.0),
            ProbabilityRule::power(3.0),
            ProbabilityRule::affine(0.5, 0.2),
            ProbabilityRule::renormalized(ProbabilityRule::power(1.0)),
            ProbabilityRule::renormalized(ProbabilityRule::power(4.0))};
}

// sum_i e^{i theta_i} alpha_i phi_i for alpha = expand(psi, obs).
StateVector rephase_in_eigenbasis(const StateVector& psi, const Observable& obs, Rng& rng) {
    const ComplexVector alpha = expand(psi, obs);
    ComplexVector out(psi.dim(), 0.0);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        const Complex a = alpha[i] * std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
        for (std::size_t r = 0; r < psi.dim(); ++r) out[r] += a * obs.eigenvector(i)[r];
    }
    return StateVector::normalized(out);
}

}  // namespace

TEST(StateVector, requires_normalization) {
    EXPECT_THROW(StateVector(ComplexVector{1.0, 1.0}), NotNormalized);
    EXPECT_THROW(StateVector(ComplexVector{1.0}), DimMismatch);
    EXPECT_NO_THROW(StateVector(ComplexVector{0.6, Complex(0.0, 0.8)}));
}

TEST(Expand, eigenstate_gives_unit_coefficient) {
    Rng rng(1);
    const Observable obs = random_observable(3, rng);
    const StateVector phi2(obs.eigenvector(1));
    const ComplexVector alpha = expand(phi2, obs);
    EXPECT_NEAR(std::abs(alpha[0]), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(alpha[1]), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(alpha[2]), 0.0, 1e-14);
}

TEST(Expand, diagonal_observable_returns_entries_in_eigen_order) {
    const double w[] = {3.0, 1.0, 2.0};
    const Observable obs(HermitianMatrix(ComplexMatrix::diagonal(w)));
    const StateVector psi = StateVector::normalized({Complex(1.0, 2.0), Complex(0.5, 0.0), Complex(0.0, -1.0)});
    const ComplexVector alpha = expand(psi, obs);
    // ascending eigenvalues 1, 2, 3 sit at entries 1, 2, 0
    EXPECT_EQ(alpha[0], psi[1]);
    EXPECT_EQ(alpha[1], psi[2]);
    EXPECT_EQ(alpha[2], psi[0]);
}

TEST(Expand, uniform_state_is_symmetric) {
    const double w[] = {1.0, 2.0, 3.0};
    const Observable obs(HermitianMatrix(ComplexMatrix::diagonal(w)));
    const double s = 1.0 / std::sqrt(3.0);
    const ComplexVector alpha = expand(StateVector::normalized({s, s, s}), obs);
    for (const auto& a : alpha) EXPECT_NEAR(std::norm(a), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(norm_squared(alpha), 1.0, 1e-12);
}

TEST(Expand, dimension_mismatch) {
    EXPECT_THROW(expand(StateVector::basis(2, 0), spin1_jz()), DimMismatch);
}

TEST(Moduli, strips_phases) {
    const ModulusVector a = moduli(ComplexVector{Complex(0.0, 0.6), 0.8});
    EXPECT_EQ(a.vector(), (std::vector<double>{0.6, 0.8}));
    EXPECT_EQ(moduli(ComplexVector{1.0, 0.0, 0.0}).vector(), (std::vector<double>{1.0, 0.0, 0.0}));

    Rng rng(4);
    const StateVector psi = haar_state(5, rng);
    ComplexVector rotated(psi.amplitudes().begin(), psi.amplitudes().end());
    for (auto& z : rotated) z *= std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
    const ModulusVector a0 = moduli(psi.amplitudes());
    const ModulusVector a1 = moduli(rotated);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(a0[i], a1[i], 1e-15);
}

TEST(Moduli, rejects_unnormalized) { EXPECT_THROW(moduli(ComplexVector{0.6, 0.6}), NotNormalized); }

TEST(Probabilities, born_certainty_on_eigenstate) {
    Rng rng(8);
    const Observable obs = random_observable(4, rng);
    const std::vector<double> p = probabilities(StateVector(obs.eigenvector(2)), obs, ProbabilityRule::born());
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(p[k], k == 2 ? 1.0 : 0.0, 1e-14);
}

TEST(Probabilities, born_symmetric_state) {
    const Observable obs = spin1_jz();
    const double s = 1.0 / std::sqrt(3.0);
    for (double p : probabilities(StateVector::normalized({s, s, s}), obs, ProbabilityRule::born()))
        EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
}

TEST(Probabilities, linear_rule_is_not_normalized) {
    const double w[] = {0.0, 1.0};
    const Observable obs(HermitianMatrix(ComplexMatrix::diagonal(w)));
    const std::vector<double> p = probabilities(StateVector::normalized({kHalf, kHalf}), obs, ProbabilityRule::power(1));
    EXPECT_NEAR(p[0], 0.70711, 5e-6);
    EXPECT_NEAR(p[1], 0.70711, 5e-6);
    EXPECT_NEAR(p[0] + p[1], 1.41421, 5e-6);
    EXPECT_NEAR(p[0] + p[1], std::sqrt(2.0), 1e-15);
}

TEST(Probabilities, phase_invariance_for_every_rule) {
    for (std::size_t d = 2; d <= 8; ++d) {
        for (std::uint64_t trial = 0; trial < 50; ++trial) {
            Rng rng = Rng::stream(100 + d, trial);
            const StateVector psi = haar_state(d, rng);
            const Observable obs = random_observable(d, rng);
            const StateVector shifted = rephase_in_eigenbasis(psi, obs, rng);
            for (const auto& rule : rules_in_scope()) {
                const auto p = probabilities(psi, obs, rule);
                const auto q = probabilities(shifted, obs, rule);
                for (std::size_t k = 0; k < d; ++k) EXPECT_LE(std::abs(p[k] - q[k]), 1e-12) << rule.name();
            }
        }
    }
}

TEST(Probabilities, born_normalization_over_random_pairs) {
    for (std::size_t d = 2; d <= 8; ++d) {
        double worst = 0.0;
        for (std::uint64_t trial = 0; trial < 1000; ++trial) {
            Rng rng = Rng::stream(d, trial);
            const auto p = probabilities(haar_state(d, rng), random_observable(d, rng), ProbabilityRule::born());
            worst = std::max(worst, std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0));
        }
        EXPECT_LE(worst, 1e-12) << "d=" << d;
    }
}

TEST(Observable, rejects_degenerate_spectrum) {
    EXPECT_THROW(Observable(HermitianMatrix(ComplexMatrix::identity(3))), DegenerateSpectrum);
}

TEST(Observable, random_spectrum_respects_gap) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        std::vector<double> w = random_spectrum(8, rng);
        std::sort(w.begin(), w.end());
        for (std::size_t i = 1; i < w.size(); ++i) EXPECT_GE(w[i] - w[i - 1], tol::kRandomSpectrumGap);
        EXPECT_GE(w.front(), -1.0);
        EXPECT_LT(w.back(), 1.0);
    }
}

TEST(SampleOutcome, inverse_cdf_rules) {
    const double even[] = {0.5, 0.5};
    EXPECT_EQ(sample_outcome(even, 0.0), 0u);
    EXPECT_EQ(sample_outcome(even, 0.4999), 0u);
    EXPECT_EQ(sample_outcome(even, 0.5), 1u);
    const double gap[] = {0.0, 1.0, 0.0};
    EXPECT_EQ(sample_outcome(gap, 0.0), 1u);
    const double short_sum[] = {0.3, 0.7 - 1e-16, 0.0};
    EXPECT_EQ(sample_outcome(short_sum, 1.0 - 1e-17), 1u);
}

TEST(Measure, eigenstate_is_certain) {
    Rng rng(21);
    const Observable obs = random_observable(3, rng);
    const StateVector phi1(obs.eigenvector(0));
    for (int shot = 0; shot < 1000; ++shot) {
        const MeasurementRecord rec = measure(phi1, obs, rng);
        EXPECT_EQ(rec.outcome_index, 0u);
        EXPECT_EQ(rec.eigenvalue, obs.eigenvalues()[0]);
        EXPECT_LE(distance_up_to_phase(rec.post_state.amplitudes(), phi1.amplitudes()), 1e-15);
    }
}

TEST(Measure, binomial_frequency_for_equal_superposition) {
    const double w[] = {0.0, 1.0};
    const Observable obs(HermitianMatrix(ComplexMatrix::diagonal(w)));
    const StateVector psi = StateVector::normalized({kHalf, kHalf});
    Rng rng(77);
    const int shots = 100000;
    int zeros = 0;
    for (int i = 0; i < shots; ++i) zeros += measure(psi, obs, rng).outcome_index == 0;
    EXPECT_LE(std::abs(zeros / static_cast<double>(shots) - 0.5), 3.0 * std::sqrt(0.25 / shots));
}

TEST(Measure, collapse_then_remeasure_repeats) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        const Observable obs = random_observable(4, rng);
        const MeasurementRecord first = measure(haar_state(4, rng), obs, rng);
        StateVector current = first.post_state;
        for (int i = 0; i < 100; ++i) {
            const MeasurementRecord again = measure(current, obs, rng);
            ASSERT_EQ(again.outcome_index, first.outcome_index);
            current = again.post_state;
        }
    }
}

TEST(Measure, rejects_non_normalized_rule) {
    Rng rng(1);
    const Observable obs = spin1_jz();
    const StateVector psi = StateVector::basis(3, 0);
    EXPECT_THROW(measure(psi, obs, ProbabilityRule::power(1), rng), RuleError);
    EXPECT_NO_THROW(measure(psi, obs, ProbabilityRule::affine(1, 0), rng));
}

TEST(MatchingOutcome, requires_an_eigenvector) {
    const Observable obs = spin1_jz();
    EXPECT_EQ(matching_outcome(obs, StateVector::basis(3, 0).amplitudes()), 2u);
    const double s = 1.0 / std::sqrt(3.0);
    EXPECT_THROW(matching_outcome(obs, ComplexVector{s, s, s}), NoMatchingOutcome);
}

TEST(Spin1, jz_eigenvalues) {
    const auto w = spin1_jz().eigenvalues();
    EXPECT_EQ(std::vector<double>(w.begin(), w.end()), (std::vector<double>{-1.0, 0.0, 1.0}));
}

TEST(Spin1, quadrupole_matches_angular_momentum_matrices) {
    // m = 1, 0, -1 basis, hbar = 1
    using Eigen::Matrix3cd;
    const std::complex<double> i(0.0, 1.0);
    Matrix3cd jx, jy;
    jx << 0, 1, 0, 1, 0, 1, 0, 1, 0;
    jx *= kHalf;
    jy << 0, -i, 0, i, 0, -i, 0, i, 0;
    jy *= kHalf;
    const Matrix3cd oracle = jx * jx - jy * jy;

    const Observable q = spin1_jx2_minus_jy2();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) EXPECT_NEAR(std::abs(q.matrix().matrix()(r, c) - oracle(r, c)), 0.0, 1e-15);

    Eigen::SelfAdjointEigenSolver<Matrix3cd> es(oracle);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(q.eigenvalues()[k], es.eigenvalues()(k), 1e-14);
    EXPECT_NEAR(q.eigenvalues()[0], -1.0, 1e-14);
    EXPECT_NEAR(q.eigenvalues()[1], 0.0, 1e-14);
    EXPECT_NEAR(q.eigenvalues()[2], 1.0, 1e-14);

    EXPECT_LE(distance_up_to_phase(q.eigenvector(0), ComplexVector{kHalf, 0.0, -kHalf}), 1e-14);
    EXPECT_LE(distance_up_to_phase(q.eigenvector(2), ComplexVector{kHalf, 0.0, kHalf}), 1e-14);
}

TEST(Spin1, both_observables_share_zero_state) {
    const ComplexVector zero{0.0, 1.0, 0.0};
    for (const Observable& obs : {spin1_jz(), spin1_jx2_minus_jy2()}) {
        const ComplexVector m0 = obs.matrix().matrix() * zero;
        const Complex w = inner(zero, m0);
        for (std::size_t r = 0; r < 3; ++r) EXPECT_LE(std::abs(m0[r] - w * zero[r]), 1e-15);
        EXPECT_EQ(matching_outcome(obs, zero), 1u);
    }
}

TEST(Spin1, zero_state_probability_is_observable_independent) {
    const Observable jz = spin1_jz();
    const Observable q = spin1_jx2_minus_jy2();
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        Rng rng = Rng::stream(7, trial);
        const StateVector psi = haar_state(3, rng);
        EXPECT_LE(std::abs(born_probabilities(psi, jz)[1] - born_probabilities(psi, q)[1]), 1e-12);
    }
}
