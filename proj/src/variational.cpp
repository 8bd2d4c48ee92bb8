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

#include "bornlab/variational.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "bornlab/errors.hpp"
#include "bornlab/parallel.hpp"
#include "bornlab/quantum.hpp"

namespace bornlab {

double PolynomialCandidate::operator()(double x) const {
    // Horner on x (c1 + x (c2 + x (c3 + x c4)))
    const auto& c = coefficients;
    return x * (c[0] + x * (c[1] + x * (c[2] + x * c[3])));
}

double PolynomialCandidate::normalization_sum(const ModulusVector& a) const {
    const auto s = power_sums(a.values());
    double sum = 0.0;
    for (std::size_t n = 0; n < 4; ++n) sum += coefficients[n] * s[n];
    return sum;
}

std::array<double, 4> power_sums(std::span<const double> a) {
    std::array<double, 4> s{};
    for (double x : a) {
        const double x2 = x * x;
        s[0] += x;
        s[1] += x2;
        s[2] += x2 * x;
        s[3] += x2 * x2;
    }
    return s;
}

double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

namespace {

constexpr double kStep = tol::kFiniteDifferenceStep;

bool inside_margin(double x) { return x >= kStep && x <= 1.0 - kStep; }

void finish(StationarityResidual& r) {
    r.max_abs = 0.0;
    for (double x : r.residuals) r.max_abs = std::max(r.max_abs, std::abs(x));
}

struct Partials {
    std::vector<std::size_t> indices;
    std::vector<double> values;
};

Partials cross_partials(const ModulusFunction& pk, const ModulusVector& a, std::size_t k) {
    if (k >= a.dim()) throw IndexOutOfRange("outcome index out of range");
    std::vector<double> x(a.values().begin(), a.values().end());
    Partials out;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (j == k || !inside_margin(a[j])) continue;
        x[j] = a[j] + kStep;
        const double plus = pk(x);
        x[j] = a[j] - kStep;
        const double minus = pk(x);
        x[j] = a[j];
        out.indices.push_back(j);
        out.values.push_back((plus - minus) / (2.0 * kStep));
    }
    return out;
}

StationarityResidual residuals_from(const Partials& partials, const ModulusVector& a, double lambda) {
    StationarityResidual r;
    r.lambda = lambda;
    r.indices = partials.indices;
    for (std::size_t i = 0; i < partials.indices.size(); ++i) {
        r.residuals.push_back(partials.values[i] - 2.0 * lambda * a[partials.indices[i]]);
    }
    finish(r);
    return r;
}

}  // namespace

StationarityResidual single_modulus_residual(const std::function<double(double)>& f, const ModulusVector& a, double lambda) {
    StationarityResidual r;
    r.lambda = lambda;
    for (std::size_t j = 0; j < a.dim(); ++j) {
        if (!inside_margin(a[j])) continue;
        r.indices.push_back(j);
        r.residuals.push_back(central_difference(f, a[j]) - 2.0 * lambda * a[j]);
    }
    finish(r);
    return r;
}

StationarityResidual single_modulus_residual(const ProbabilityRule& rule, const ModulusVector& a, double lambda) {
    return single_modulus_residual(rule.function(), a, lambda);
}

StationarityResidual cross_residual(const ModulusFunction& pk, const ModulusVector& a, std::size_t k, double lambda) {
    return residuals_from(cross_partials(pk, a, k), a, lambda);
}

StationarityResidual cross_residual_fitted(const ModulusFunction& pk, const ModulusVector& a, std::size_t k) {
    const Partials partials = cross_partials(pk, a, k);
    // argmin_lambda sum_j (d_j - 2 lambda a_j)^2
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < partials.indices.size(); ++i) {
        const double aj = a[partials.indices[i]];
        num += partials.values[i] * aj;
        den += aj * aj;
    }
    const double lambda = den > 0.0 ? num / (2.0 * den) : 0.0;
    return residuals_from(partials, a, lambda);
}

namespace {

// Family lambda g(x) + mu with g(0) = g0, g(1) = g1; solves
// lambda g0 + mu = 0, lambda g1 + mu = 1.
BoundaryFit fit_family(double g0, double g1) {
    BoundaryFit fit;
    fit.lambda = 1.0 / (g1 - g0);
    fit.mu = 0.0 - g0 * fit.lambda;
    return fit;
}

}  // namespace

BoundaryFit fit_single_modulus_family() { return fit_family(0.0, 1.0); }

BoundaryFit fit_complement_family() { return fit_family(1.0, 0.0); }

ClosedFormCheck verify_closed_form(std::size_t samples, std::uint64_t seed) {
    ClosedFormCheck check;
    check.single_modulus = fit_single_modulus_family();
    check.complement = fit_complement_family();
    check.samples = samples;
    const BoundaryFit s = check.single_modulus;
    const BoundaryFit c = check.complement;
    for (std::size_t i = 0; i < samples; ++i) {
        Rng rng = Rng::stream(seed, i);
        const ModulusVector a = haar_moduli(2 + i % 7, rng);
        for (double ak : a.values()) {
            const double born = ak * ak;
            const double f = s.lambda * born + s.mu;
            const double pk = c.lambda * (1.0 - born) + c.mu;
            check.single_modulus_deviation = std::max(check.single_modulus_deviation, std::abs(f - born));
            check.complement_deviation = std::max(check.complement_deviation, std::abs(pk - born));
        }
    }
    return check;
}

namespace {

struct LeastSquaresSystem {
    std::vector<std::array<double, 4>> rows;
    std::vector<double> rhs;
};

LeastSquaresSystem assemble(std::span<const ModulusVector> points, double boundary_weight) {
    LeastSquaresSystem sys;
    sys.rows.reserve(points.size() + 1);
    for (const auto& a : points) {
        sys.rows.push_back(power_sums(a.values()));
        sys.rhs.push_back(1.0);
    }
    sys.rows.push_back({boundary_weight, boundary_weight, boundary_weight, boundary_weight});
    sys.rhs.push_back(boundary_weight);
    return sys;
}

// Householder QR least squares for a tall m x 4 system.
std::array<double, 4> solve_least_squares(LeastSquaresSystem sys) {
    constexpr std::size_t n = 4;
    const std::size_t m = sys.rows.size();
    if (m < n) throw RankDeficient("fewer equations than coefficients");
    auto& A = sys.rows;
    auto& b = sys.rhs;
    std::array<double, n> diag{};
    for (std::size_t j = 0; j < n; ++j) {
        double col_norm = 0.0;
        for (std::size_t i = j; i < m; ++i) col_norm += A[i][j] * A[i][j];
        col_norm = std::sqrt(col_norm);
        if (col_norm == 0.0) {
            diag[j] = 0.0;
            continue;
        }
        const double alpha = A[j][j] > 0.0 ? -col_norm : col_norm;
        std::vector<double> v(m - j);
        for (std::size_t i = j; i < m; ++i) v[i - j] = A[i][j];
        v[0] -= alpha;
        double vnorm2 = 0.0;
        for (double x : v) vnorm2 += x * x;
        if (vnorm2 > 0.0) {
            for (std::size_t c = j; c < n; ++c) {
                double dot = 0.0;
                for (std::size_t i = j; i < m; ++i) dot += v[i - j] * A[i][c];
                const double scale = 2.0 * dot / vnorm2;
                for (std::size_t i = j; i < m; ++i) A[i][c] -= scale * v[i - j];
            }
            double dot = 0.0;
            for (std::size_t i = j; i < m; ++i) dot += v[i - j] * b[i];
            const double scale = 2.0 * dot / vnorm2;
            for (std::size_t i = j; i < m; ++i) b[i] -= scale * v[i - j];
        }
        diag[j] = A[j][j];
    }
    double largest = 0.0;
    for (double d : diag) largest = std::max(largest, std::abs(d));
    for (std::size_t j = 0; j < n; ++j) {
        if (!(std::abs(diag[j]) > tol::kRankRelative * largest)) {
            throw RankDeficient("recovery design matrix is numerically singular (column " + std::to_string(j) + ")");
        }
    }
    std::array<double, n> x{};
    for (std::size_t jj = n; jj-- > 0;) {
        double acc = b[jj];
        for (std::size_t c = jj + 1; c < n; ++c) acc -= A[jj][c] * x[c];
        x[jj] = acc / A[jj][jj];
    }
    return x;
}

}  // namespace

double recovery_objective(std::span<const ModulusVector> points, const PolynomialCandidate& candidate,
                          double boundary_weight) {
    const LeastSquaresSystem sys = assemble(points, boundary_weight);
    double total = 0.0;
    for (std::size_t i = 0; i < sys.rows.size(); ++i) {
        double r = -sys.rhs[i];
        for (std::size_t n = 0; n < 4; ++n) r += sys.rows[i][n] * candidate.coefficients[n];
        total += r * r;
    }
    return total;
}

RecoveryResult recover_rule_from_points(std::span<const ModulusVector> points, double boundary_weight) {
    RecoveryResult result;
    result.candidate.coefficients = solve_least_squares(assemble(points, boundary_weight));
    result.objective_value = recovery_objective(points, result.candidate, boundary_weight);
    result.sample_count = points.size();
    for (const auto& a : points) {
        if (std::find(result.dims_used.begin(), result.dims_used.end(), a.dim()) == result.dims_used.end()) {
            result.dims_used.push_back(a.dim());
        }
    }
    return result;
}

RecoveryResult recover_rule(std::span<const std::size_t> dims, std::size_t samples_per_dim, std::uint64_t seed,
                            unsigned threads) {
    if (dims.empty()) throw DomainError("recover_rule needs at least one dimension");
    if (samples_per_dim < 40) throw DomainError("recover_rule needs at least 40 samples per dimension");
    const std::size_t total = dims.size() * samples_per_dim;
    std::vector<std::optional<ModulusVector>> drawn(total);
    parallel_for(total, threads, [&](std::size_t t) {
        Rng rng = Rng::stream(seed, t);
        drawn[t].emplace(haar_moduli(dims[t / samples_per_dim], rng));
    });
    std::vector<ModulusVector> points;
    points.reserve(total);
    for (auto& p : drawn) points.push_back(std::move(*p));
    RecoveryResult result = recover_rule_from_points(points);
    result.dims_used.assign(dims.begin(), dims.end());
    result.seed = seed;
    return result;
}

}  // namespace bornlab
