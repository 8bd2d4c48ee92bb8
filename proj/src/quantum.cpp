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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bornlab/errors.hpp"

namespace bornlab {

namespace {

void require_dim(std::size_t dim, const char* what) {
    if (dim < tol::kMinDim) throw DimMismatch(std::string(what) + " requires dimension >= 2");
}

void require_same_dim(std::size_t a, std::size_t b) {
    if (a != b) {
        throw DimMismatch("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

}  // namespace

StateVector::StateVector(ComplexVector amplitudes) : psi_(std::move(amplitudes)) {
    require_dim(psi_.size(), "StateVector");
    const double n2 = norm_squared(psi_);
    if (!(std::abs(n2 - 1.0) <= tol::kNormalization)) {
        throw NotNormalized("state is not normalized: ||psi||^2 = " + std::to_string(n2));
    }
}

StateVector StateVector::normalized(ComplexVector amplitudes) {
    const double len = norm(amplitudes);
    if (!(len > tol::kZeroVector)) throw ZeroVector("cannot normalize a zero state");
    for (auto& z : amplitudes) z /= len;
    return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw IndexOutOfRange("basis index out of range");
    ComplexVector v(dim, 0.0);
    v[index] = 1.0;
    return StateVector(std::move(v));
}

StateVector haar_state(std::size_t dim, Rng& rng) {
    require_dim(dim, "haar_state");
    for (;;) {
        ComplexVector v(dim);
        for (auto& z : v) z = rng.complex_normal();
        if (norm(v) > tol::kZeroVector) return StateVector::normalized(std::move(v));
    }
}

ModulusVector haar_moduli(std::size_t dim, Rng& rng) { return moduli(haar_state(dim, rng).amplitudes()); }

Observable::Observable(HermitianMatrix matrix, std::string label)
    : matrix_(std::move(matrix)), eigensystem_(eigendecompose(matrix_)), label_(std::move(label)) {
    require_dim(matrix_.dim(), "Observable");
    const auto& w = eigensystem_.eigenvalues;
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (!(w[i] - w[i - 1] > tol::kEigenvalueSeparation)) {
            throw DegenerateSpectrum("observable '" + label_ + "' has a degenerate spectrum");
        }
    }
}

std::vector<double> random_spectrum(std::size_t dim, Rng& rng) {
    std::vector<double> w(dim);
    for (;;) {
        for (auto& x : w) x = rng.uniform(-1.0, 1.0);
        std::vector<double> sorted = w;
        std::sort(sorted.begin(), sorted.end());
        bool separated = true;
        for (std::size_t i = 1; i < sorted.size(); ++i)
            if (sorted[i] - sorted[i - 1] < tol::kRandomSpectrumGap) separated = false;
        if (separated) return w;
    }
}

HermitianMatrix hermitian_from_basis(const ComplexMatrix& basis, std::span<const double> spectrum) {
    require_same_dim(basis.dim(), spectrum.size());
    ComplexMatrix m = basis * ComplexMatrix::diagonal(spectrum) * basis.adjoint();
    const std::size_t n = m.dim();
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = m(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }
    }
    return HermitianMatrix(std::move(m));
}

Observable random_observable(std::size_t dim, Rng& rng) {
    require_dim(dim, "random_observable");
    const UnitaryMatrix u = haar_unitary(dim, rng);
    const std::vector<double> w = random_spectrum(dim, rng);
    return Observable(hermitian_from_basis(u.matrix(), w), "random");
}

ComplexVector expand(const StateVector& state, const Observable& obs) {
    require_same_dim(state.dim(), obs.dim());
    ComplexVector alpha(obs.dim());
    for (std::size_t i = 0; i < obs.dim(); ++i) alpha[i] = inner(obs.eigenvector(i), state.amplitudes());
    return alpha;
}

ModulusVector moduli(std::span<const Complex> amplitudes) {
    const double n2 = norm_squared(amplitudes);
    if (!(std::abs(n2 - 1.0) <= tol::kNormalization)) {
        throw NotNormalized("amplitudes are not normalized: sum |alpha|^2 = " + std::to_string(n2));
    }
    std::vector<double> a(amplitudes.size());
    std::transform(amplitudes.begin(), amplitudes.end(), a.begin(), [](Complex z) { return std::abs(z); });
    return ModulusVector(std::move(a));
}

std::vector<double> probabilities(const StateVector& state, const Observable& obs, const ProbabilityRule& rule) {
    return rule.probabilities(moduli(expand(state, obs)));
}

std::vector<double> born_probabilities(const StateVector& state, const Observable& obs) {
    const ComplexVector alpha = expand(state, obs);
    std::vector<double> p(alpha.size());
    std::transform(alpha.begin(), alpha.end(), p.begin(), [](Complex z) { return std::norm(z); });
    return p;
}

std::size_t sample_outcome(std::span<const double> probabilities, double u) {
    if (probabilities.empty()) throw DimMismatch("no outcomes to sample");
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
        if (probabilities[k] > 0.0) last_positive = k;
        cumulative += probabilities[k];
        if (u < cumulative) return k;
    }
    return last_positive;
}

MeasurementRecord measure(const StateVector& state, const Observable& obs, Rng& rng) {
    const std::vector<double> p = born_probabilities(state, obs);
    const std::size_t k = sample_outcome(p, rng.uniform());
    return MeasurementRecord{k, obs.eigenvalues()[k], StateVector(obs.eigenvector(k))};
}

MeasurementRecord measure(const StateVector& state, const Observable& obs, const ProbabilityRule& rule, Rng& rng) {
    if (!is_born_equivalent(rule)) {
        throw RuleError("cannot sample outcomes from non-normalized rule '" + rule.name() + "'");
    }
    return measure(state, obs, rng);
}

std::size_t matching_outcome(const Observable& obs, std::span<const Complex> target) {
    require_same_dim(obs.dim(), target.size());
    std::size_t best = 0;
    double best_overlap = -1.0;
    for (std::size_t i = 0; i < obs.dim(); ++i) {
        const double overlap = std::abs(inner(obs.eigenvector(i), target));
        if (overlap > best_overlap) {
            best_overlap = overlap;
            best = i;
        }
    }
    if (!(best_overlap > 1.0 - tol::kOverlapMatch)) {
        throw NoMatchingOutcome("no eigenvector of '" + obs.label() + "' matches the target state (best overlap " +
                                std::to_string(best_overlap) + ")");
    }
    return best;
}

Observable spin1_jz() {
    const double w[] = {1.0, 0.0, -1.0};
    return Observable(HermitianMatrix(ComplexMatrix::diagonal(w)), "J_z");
}

Observable spin1_jx2_minus_jy2() {
    ComplexMatrix m(3);
    m(0, 2) = 1.0;
    m(2, 0) = 1.0;
    return Observable(HermitianMatrix(std::move(m)), "J_x^2 - J_y^2");
}

}  // namespace bornlab
