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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bornlab/linalg.hpp"
#include "bornlab/orthant.hpp"
#include "bornlab/quantum.hpp"
#include "bornlab/rules.hpp"

namespace bornlab {

/// Unitary of block form (phase on e_k) + (unitary on the complement of e_k).
/// Preserves the single modulus |alpha_k| of any amplitude vector.
class StabilizerUnitary {
   public:
    /// Embeds `phase` at (k, k) and `complement` on the remaining indices in
    /// increasing order. Throws IndexOutOfRange, DimMismatch, DomainError
    /// (|phase| != 1).
    StabilizerUnitary(std::size_t dim, std::size_t fixed_index, Complex phase, const UnitaryMatrix& complement);

    std::size_t dim() const { return matrix_.dim(); }
    std::size_t fixed_index() const { return k_; }
    const UnitaryMatrix& unitary() const { return matrix_; }
    ComplexVector apply(std::span<const Complex> alpha) const { return matrix_.apply(alpha); }

   private:
    std::size_t k_;
    UnitaryMatrix matrix_;
};

/// Random stabilizer of index k: uniform phase, Haar complement block.
StabilizerUnitary stabilizer_unitary(std::size_t dim, std::size_t k, Rng& rng);

/// Split of an orthant point into a_k and the tail on the orthant of radius
/// rho = sqrt(1 - a_k^2) in d - 1 dimensions.
struct ComplementPoint {
    double fixed_value = 0.0;
    std::vector<double> tail;

    /// Throws IndexOutOfRange.
    static ComplementPoint split(const ModulusVector& a, std::size_t k);
    ModulusVector join(std::size_t k) const;
    double radius() const;
};

/// a with the tail replaced by a fresh point on the same complement orthant.
/// Throws IndexOutOfRange.
ModulusVector complement_rotation(const ModulusVector& a, std::size_t k, Rng& rng);

/// Observable having phi_k as an eigenvector, Haar eigenvectors on the
/// complement and a random_spectrum. Throws NotNormalized.
Observable observable_with_eigenstate(std::span<const Complex> phi_k, Rng& rng);

struct InvarianceReport {
    std::string rule;
    std::size_t dim = 0;
    /// Fixed outcome index (unobserved scan). The observable scan records the
    /// matched index of every draw in outcome_indices instead.
    std::optional<std::size_t> k;
    std::size_t draw_count = 0;
    std::vector<double> p_values;
    std::vector<std::size_t> outcome_indices;
    double spread = 0.0;
    std::uint64_t seed = 0;
};

/// max - min of p_k across the given observables, each evaluated at the
/// outcome matching phi_k.
InvarianceReport independence_across(const StateVector& psi, const StateVector& phi_k, const ProbabilityRule& rule,
                                     std::span<const Observable> observables);

/// Draws n observables sharing phi_k (draw i uses stream i of `seed`) and
/// reports the spread of p_k. Throws DomainError if n < 2.
InvarianceReport observable_independence_scan(const StateVector& psi, const StateVector& phi_k,
                                              const ProbabilityRule& rule, std::size_t n, std::uint64_t seed,
                                              unsigned threads = 1);

/// Applies n complement rotations at fixed a_k (rotation i uses stream i of
/// `seed`) and reports the spread of p_k. Throws DomainError if n < 2.
InvarianceReport unobserved_independence_scan(const ModulusVector& a, std::size_t k, const ProbabilityRule& rule,
                                              std::size_t n, std::uint64_t seed, unsigned threads = 1);

}  // namespace bornlab
