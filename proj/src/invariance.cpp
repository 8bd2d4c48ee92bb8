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

#include "bornlab/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bornlab/errors.hpp"
#include "bornlab/parallel.hpp"

namespace bornlab {

namespace {

void require_index(std::size_t k, std::size_t dim) {
    if (k >= dim) {
        throw IndexOutOfRange("index " + std::to_string(k) + " out of range for dimension " + std::to_string(dim));
    }
}

ComplexMatrix embed_stabilizer(std::size_t dim, std::size_t k, Complex phase, const UnitaryMatrix& complement) {
    require_index(k, dim);
    if (complement.dim() + 1 != dim) throw DimMismatch("complement block must have dimension d - 1");
    if (!(std::abs(std::abs(phase) - 1.0) <= tol::kNormalization)) {
        throw DomainError("stabilizer phase must have unit modulus");
    }
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < dim; ++i)
        if (i != k) others.push_back(i);
    ComplexMatrix m(dim);
    m(k, k) = phase;
    for (std::size_t r = 0; r < others.size(); ++r)
        for (std::size_t c = 0; c < others.size(); ++c) m(others[r], others[c]) = complement.matrix()(r, c);
    return m;
}

double spread_of(std::span<const double> values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

}  // namespace

StabilizerUnitary::StabilizerUnitary(std::size_t dim, std::size_t fixed_index, Complex phase,
                                     const UnitaryMatrix& complement)
    : k_(fixed_index), matrix_(embed_stabilizer(dim, fixed_index, phase, complement)) {}

StabilizerUnitary stabilizer_unitary(std::size_t dim, std::size_t k, Rng& rng) {
    require_index(k, dim);
    if (dim < 2) throw DimMismatch("stabilizer_unitary requires dimension >= 2");
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    const UnitaryMatrix complement = haar_unitary(dim - 1, rng);
    return StabilizerUnitary(dim, k, std::polar(1.0, theta), complement);
}

ComplementPoint ComplementPoint::split(const ModulusVector& a, std::size_t k) {
    require_index(k, a.dim());
    ComplementPoint p;
    p.fixed_value = a[k];
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (i != k) p.tail.push_back(a[i]);
    return p;
}

ModulusVector ComplementPoint::join(std::size_t k) const {
    require_index(k, tail.size() + 1);
    std::vector<double> a(tail.begin(), tail.end());
    a.insert(a.begin() + static_cast<std::ptrdiff_t>(k), fixed_value);
    return ModulusVector(std::move(a));
}

double ComplementPoint::radius() const {
    double sum = 0.0;
    for (double x : tail) sum += x * x;
    return std::sqrt(sum);
}

ModulusVector complement_rotation(const ModulusVector& a, std::size_t k, Rng& rng) {
    ComplementPoint p = ComplementPoint::split(a, k);
    const double rho = p.radius();
    if (p.tail.size() < 2) return a;
    std::vector<double> g(p.tail.size());
    double len = 0.0;
    while (!(len > 0.0)) {
        for (double& x : g) x = std::abs(rng.normal());
        double sum = 0.0;
        for (double x : g) sum += x * x;
        len = std::sqrt(sum);
    }
    for (std::size_t i = 0; i < g.size(); ++i) p.tail[i] = rho * g[i] / len;
    return p.join(k);
}

Observable observable_with_eigenstate(std::span<const Complex> phi_k, Rng& rng) {
    const double n2 = norm_squared(phi_k);
    if (!(std::abs(n2 - 1.0) <= tol::kNormalization)) {
        throw NotNormalized("phi_k must be normalized: ||phi_k||^2 = " + std::to_string(n2));
    }
    const std::size_t dim = phi_k.size();
    if (dim < tol::kMinDim) throw DimMismatch("observable_with_eigenstate requires dimension >= 2");

    const ComplexMatrix base = complete_basis(phi_k).matrix();
    const ComplexMatrix mix = haar_unitary(dim - 1, rng).matrix();
    ComplexMatrix basis(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        basis(r, 0) = base(r, 0);
        for (std::size_t c = 1; c < dim; ++c) {
            Complex acc = 0.0;
            for (std::size_t l = 1; l < dim; ++l) acc += base(r, l) * mix(l - 1, c - 1);
            basis(r, c) = acc;
        }
    }
    const std::vector<double> spectrum = random_spectrum(dim, rng);
    return Observable(hermitian_from_basis(basis, spectrum), "shares phi_k");
}

InvarianceReport independence_across(const StateVector& psi, const StateVector& phi_k, const ProbabilityRule& rule,
                                     std::span<const Observable> observables) {
    if (observables.empty()) throw DomainError("independence_across needs at least one observable");
    InvarianceReport report;
    report.rule = rule.name();
    report.dim = psi.dim();
    report.draw_count = observables.size();
    for (const Observable& obs : observables) {
        const std::size_t k = matching_outcome(obs, phi_k.amplitudes());
        report.outcome_indices.push_back(k);
        report.p_values.push_back(probabilities(psi, obs, rule)[k]);
    }
    report.spread = spread_of(report.p_values);
    return report;
}

InvarianceReport observable_independence_scan(const StateVector& psi, const StateVector& phi_k,
                                              const ProbabilityRule& rule, std::size_t n, std::uint64_t seed,
                                              unsigned threads) {
    if (n < 2) throw DomainError("observable_independence_scan requires n >= 2");
    if (psi.dim() != phi_k.dim()) throw DimMismatch("psi and phi_k dimensions differ");
    std::vector<std::optional<Observable>> drawn(n);
    parallel_for(n, threads, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, i);
        drawn[i].emplace(observable_with_eigenstate(phi_k.amplitudes(), rng));
    });
    std::vector<Observable> observables;
    observables.reserve(n);
    for (auto& o : drawn) observables.push_back(std::move(*o));
    InvarianceReport report = independence_across(psi, phi_k, rule, observables);
    report.seed = seed;
    return report;
}

InvarianceReport unobserved_independence_scan(const ModulusVector& a, std::size_t k, const ProbabilityRule& rule,
                                              std::size_t n, std::uint64_t seed, unsigned threads) {
    if (n < 2) throw DomainError("unobserved_independence_scan requires n >= 2");
    require_index(k, a.dim());
    std::vector<double> p(n);
    parallel_for(n, threads, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, i);
        p[i] = rule.probabilities(complement_rotation(a, k, rng))[k];
    });
    InvarianceReport report;
    report.rule = rule.name();
    report.dim = a.dim();
    report.k = k;
    report.draw_count = n;
    report.outcome_indices.assign(n, k);
    report.spread = spread_of(p);
    report.p_values = std::move(p);
    report.seed = seed;
    return report;
}

}  // namespace bornlab
