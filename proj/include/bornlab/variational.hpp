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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bornlab/orthant.hpp"
#include "bornlab/rules.hpp"
#include "bornlab/tolerances.hpp"

namespace bornlab {

/// f(x) = sum_{n=1..4} c_n x^n. The constant term is structurally zero, so f(0) = 0.
struct PolynomialCandidate {
    std::array<double, 4> coefficients{};

    double operator()(double x) const;
    /// sum_i f(a_i) expanded as sum_n c_n (sum_i a_i^n)
    double normalization_sum(const ModulusVector& a) const;
};

/// Power sums (sum_i a_i, sum_i a_i^2, sum_i a_i^3, sum_i a_i^4).
std::array<double, 4> power_sums(std::span<const double> a);

struct StationarityResidual {
    double lambda = 0.0;
    /// Indices j at which a residual was evaluated.
    std::vector<std::size_t> indices;
    std::vector<double> residuals;
    double max_abs = 0.0;
};

/// Central difference of f at x with step h.
double central_difference(const std::function<double(double)>& f, double x,
                          double h = tol::kFiniteDifferenceStep);

/// residual_j = f'(a_j) - 2 lambda a_j for every a_j in [h, 1 - h].
StationarityResidual single_modulus_residual(const std::function<double(double)>& f, const ModulusVector& a, double lambda);
/// Same, for a plain rule.
StationarityResidual single_modulus_residual(const ProbabilityRule& rule, const ModulusVector& a, double lambda);

/// p_k as a function of the raw modulus vector. Partial derivatives perturb
/// one entry at a time without re-projecting onto the orthant.
using ModulusFunction = std::function<double(std::span<const double>)>;

/// residual_j = dp_k/da_j - 2 lambda a_j for j != k with a_j in [h, 1 - h].
StationarityResidual cross_residual(const ModulusFunction& pk, const ModulusVector& a, std::size_t k, double lambda);

/// As cross_residual with lambda chosen by least squares over the residuals.
StationarityResidual cross_residual_fitted(const ModulusFunction& pk, const ModulusVector& a, std::size_t k);

/// The two free constants of a stationary family, fixed by f(0) = 0 and f(1) = 1.
struct BoundaryFit {
    double lambda = 0.0;
    double mu = 0.0;
};

/// f(x) = lambda x^2 + mu with f(0) = 0, f(1) = 1.
BoundaryFit fit_single_modulus_family();
/// p_k = lambda (1 - a_k^2) + mu with p_k = 0 at a_k = 0 and p_k = 1 at a_k = 1.
BoundaryFit fit_complement_family();

struct ClosedFormCheck {
    BoundaryFit single_modulus;
    BoundaryFit complement;
    std::size_t samples = 0;
    /// max |f(a_k) - a_k^2| over all sampled moduli
    double single_modulus_deviation = 0.0;
    /// max |p_k - a_k^2| over all sampled moduli
    double complement_deviation = 0.0;
};

/// Fits both families and measures their deviation from a_k^2 over `samples`
/// Haar-random orthant points (sample i uses stream i of `seed`; d cycles
/// through 2..8).
ClosedFormCheck verify_closed_form(std::size_t samples, std::uint64_t seed);

struct RecoveryResult {
    PolynomialCandidate candidate;
    /// Weighted sum of squared residuals at the solution.
    double objective_value = 0.0;
    std::size_t sample_count = 0;
    std::vector<std::size_t> dims_used;
    std::uint64_t seed = 0;
};

/// Least-squares fit of c_1..c_4 to sum_n c_n (sum_i a_i^n) = 1 at every
/// point plus boundary_weight * (sum_n c_n - 1) = 0. Throws RankDeficient
/// when the design matrix is numerically singular.
RecoveryResult recover_rule_from_points(std::span<const ModulusVector> points,
                                        double boundary_weight = tol::kBoundaryWeight);

/// Samples `samples_per_dim` Haar orthant points in each dimension and calls
/// recover_rule_from_points. Throws DomainError if dims is empty or
/// samples_per_dim < 40.
RecoveryResult recover_rule(std::span<const std::size_t> dims, std::size_t samples_per_dim, std::uint64_t seed,
                            unsigned threads = 1);

/// sum of squared residuals of the recovery system at `candidate`.
double recovery_objective(std::span<const ModulusVector> points, const PolynomialCandidate& candidate,
                          double boundary_weight = tol::kBoundaryWeight);

}  // namespace bornlab
