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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bornlab/linalg.hpp"
#include "bornlab/orthant.hpp"
#include "bornlab/rng.hpp"
#include "bornlab/rules.hpp"

namespace bornlab {

/// Pure state: unit-norm amplitude vector, d >= 2.
class StateVector {
   public:
    /// Throws NotNormalized if | ||psi||^2 - 1 | > tol::kNormalization.
    explicit StateVector(ComplexVector amplitudes);
    /// Scales a nonzero vector to unit norm.
    static StateVector normalized(ComplexVector amplitudes);
    /// Canonical basis vector e_index.
    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return psi_.size(); }
    std::span<const Complex> amplitudes() const { return psi_; }
    const Complex& operator[](std::size_t i) const { return psi_[i]; }

   private:
    ComplexVector psi_;
};

/// Haar-random pure state.
StateVector haar_state(std::size_t dim, Rng& rng);
/// Moduli of a Haar-random state (the induced measure on the unit orthant).
ModulusVector haar_moduli(std::size_t dim, Rng& rng);

/// Hermitian operator with a cached, nondegenerate eigensystem.
class Observable {
   public:
    /// Throws DegenerateSpectrum if two eigenvalues lie within tol::kEigenvalueSeparation.
    explicit Observable(HermitianMatrix matrix, std::string label = {});

    std::size_t dim() const { return matrix_.dim(); }
    const HermitianMatrix& matrix() const { return matrix_; }
    const Eigensystem& eigensystem() const { return eigensystem_; }
    const std::string& label() const { return label_; }
    std::span<const double> eigenvalues() const { return eigensystem_.eigenvalues; }
    const ComplexVector& eigenvector(std::size_t i) const { return eigensystem_.eigenvectors[i]; }

   private:
    HermitianMatrix matrix_;
    Eigensystem eigensystem_;
    std::string label_;
};

/// i.i.d. uniform values on [-1, 1], redrawn until every pair is at least
/// tol::kRandomSpectrumGap apart. Order is the draw order, not sorted.
std::vector<double> random_spectrum(std::size_t dim, Rng& rng);

/// U diag(spectrum) U^dagger for the given unitary, Hermitized entrywise.
HermitianMatrix hermitian_from_basis(const ComplexMatrix& basis, std::span<const double> spectrum);

/// Observable with Haar eigenbasis and random_spectrum eigenvalues.
Observable random_observable(std::size_t dim, Rng& rng);

/// alpha_i = <phi_i, psi> in the observable's eigenbasis.
ComplexVector expand(const StateVector& state, const Observable& obs);

/// Entrywise |alpha_i|. Throws NotNormalized if the input is not unit-norm
/// within tol::kNormalization.
ModulusVector moduli(std::span<const Complex> amplitudes);

/// p_k under `rule` for the outcomes of `obs`. Not normalized unless the rule is.
std::vector<double> probabilities(const StateVector& state, const Observable& obs, const ProbabilityRule& rule);

/// |<phi_k, psi>|^2 for every k.
std::vector<double> born_probabilities(const StateVector& state, const Observable& obs);

struct MeasurementRecord {
    std::size_t outcome_index = 0;
    double eigenvalue = 0.0;
    StateVector post_state;
};

/// Index of the smallest k with u < sum_{i<=k} p_i; the last index with
/// p_i > 0 if rounding leaves u beyond the final cumulative sum.
std::size_t sample_outcome(std::span<const double> probabilities, double u);

/// Samples an outcome with Born probabilities and collapses onto its eigenvector.
MeasurementRecord measure(const StateVector& state, const Observable& obs, Rng& rng);
/// As above, but throws RuleError unless `rule` is Born-equivalent.
MeasurementRecord measure(const StateVector& state, const Observable& obs, const ProbabilityRule& rule, Rng& rng);

/// Index of the eigenvector with the largest |<phi_i, target>|. Throws
/// NoMatchingOutcome unless that overlap exceeds 1 - tol::kOverlapMatch.
std::size_t matching_outcome(const Observable& obs, std::span<const Complex> target);

/// J_z = diag(1, 0, -1) in the m = 1, 0, -1 ordering, hbar = 1.
Observable spin1_jz();
/// J_x^2 - J_y^2 = [[0, 0, 1], [0, 0, 0], [1, 0, 0]].
Observable spin1_jx2_minus_jy2();

}  // namespace bornlab
