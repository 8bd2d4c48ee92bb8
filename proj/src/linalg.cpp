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

#include "bornlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bornlab/errors.hpp"

namespace bornlab {

ComplexMatrix::ComplexMatrix(std::size_t dim) : ComplexMatrix(dim, std::vector<Complex>(dim * dim)) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> row_major)
    : dim_(dim), data_(std::move(row_major)) {
    if (dim_ == 0) throw DimMismatch("matrix dimension must be positive");
    if (data_.size() != dim_ * dim_) {
        throw DimMismatch("expected " + std::to_string(dim_ * dim_) + " entries, got " +
                          std::to_string(data_.size()));
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::from_columns(std::span<const ComplexVector> columns) {
    ComplexMatrix m(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != columns.size()) throw DimMismatch("columns must form a square matrix");
        for (std::size_t i = 0; i < columns.size(); ++i) m(i, j) = columns[j][i];
    }
    return m;
}

ComplexVector ComplexMatrix::column(std::size_t col) const {
    ComplexVector v(dim_);
    for (std::size_t i = 0; i < dim_; ++i) v[i] = (*this)(i, col);
    return v;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim_ != b.dim_) throw DimMismatch("matrix product dimension mismatch");
    const std::size_t n = a.dim_;
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v) {
    if (m.dim_ != v.size()) throw DimMismatch("matrix-vector dimension mismatch");
    ComplexVector out(m.dim_);
    for (std::size_t i = 0; i < m.dim_; ++i) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < m.dim_; ++j) acc += m(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim_ != b.dim_) throw DimMismatch("matrix difference dimension mismatch");
    ComplexMatrix c(a.dim_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = a.data_[i] - b.data_[i];
    return c;
}

double ComplexMatrix::max_abs() const {
    double best = 0.0;
    for (const auto& z : data_) {
        const double x = std::abs(z);
        if (std::isnan(x)) return x;
        best = std::max(best, x);
    }
    return best;
}

double ComplexMatrix::hermitian_defect() const {
    double best = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j) {
            const double x = std::abs((*this)(i, j) - std::conj((*this)(j, i)));
            if (std::isnan(x)) return x;
            best = std::max(best, x);
        }
    return best;
}

double ComplexMatrix::unitarity_defect() const {
    return (adjoint() * *this - identity(dim_)).max_abs();
}

HermitianMatrix::HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
    const double defect = m_.hermitian_defect();
    if (!(defect <= tol::kHermitian)) {
        throw NotHermitian("matrix is not Hermitian: max |M - M^dagger| = " + std::to_string(defect));
    }
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
    const double defect = m_.unitarity_defect();
    if (!(defect <= tol::kUnitary)) {
        throw NotUnitary("matrix is not unitary: max |U^dagger U - I| = " + std::to_string(defect));
    }
}

ComplexMatrix Eigensystem::eigenvector_matrix() const { return ComplexMatrix::from_columns(eigenvectors); }

ComplexMatrix Eigensystem::reconstruct() const {
    const ComplexMatrix v = eigenvector_matrix();
    return v * ComplexMatrix::diagonal(eigenvalues) * v.adjoint();
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) throw DimMismatch("inner product dimension mismatch");
    Complex acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double norm_squared(std::span<const Complex> v) {
    double acc = 0.0;
    for (const auto& z : v) acc += std::norm(z);
    return acc;
}

double norm(std::span<const Complex> v) { return std::sqrt(norm_squared(v)); }

void fix_global_phase(ComplexVector& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    const double mag = std::abs(v[best]);
    if (mag == 0.0) return;
    const Complex rotate = std::conj(v[best]) / mag;
    for (auto& z : v) z *= rotate;
    v[best] = mag;
}

double distance_up_to_phase(std::span<const Complex> a, std::span<const Complex> b) {
    const Complex overlap = inner(b, a);
    const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - phase * b[i]));
    return best;
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (i != j) acc += std::norm(a(i, j));
    return std::sqrt(acc);
}

double frobenius_norm(const ComplexMatrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) acc += std::norm(a(i, j));
    return std::sqrt(acc);
}

// Annihilates a(p, q) with R = diag(1, e^{-i phi}) * [[c, s], [-s, c]] where
// a(p, q) = |a(p, q)| e^{i phi}; a <- R^dagger a R, v <- v R.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const Complex g = a(p, q);
    const double mag = std::abs(g);
    if (mag == 0.0) return;
    const Complex phase = g / mag;
    const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
    double t;
    if (std::abs(theta) > 1e150) {
        t = 0.5 / theta;
    } else {
        t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    const Complex r00 = c;
    const Complex r01 = s;
    const Complex r10 = -s * std::conj(phase);
    const Complex r11 = c * std::conj(phase);

    const std::size_t n = a.dim();
    for (std::size_t k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = akp * r00 + akq * r10;
        a(k, q) = akp * r01 + akq * r11;
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = vkp * r00 + vkq * r10;
        v(k, q) = vkp * r01 + vkq * r11;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = std::conj(r00) * apk + std::conj(r10) * aqk;
        a(q, k) = std::conj(r01) * apk + std::conj(r11) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
}

}  // namespace

Eigensystem eigendecompose(const HermitianMatrix& m, const JacobiOptions& options) {
    const std::size_t n = m.dim();
    ComplexMatrix a = m.matrix();
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double threshold = options.off_diagonal_tolerance * std::max(1.0, frobenius_norm(a));
    bool converged = off_diagonal_norm(a) < threshold;
    for (int sweep = 0; !converged && sweep < options.max_sweeps; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
        converged = off_diagonal_norm(a) < threshold;
    }
    if (!converged) {
        throw NonConvergence("Jacobi eigensolver did not converge within " +
                             std::to_string(options.max_sweeps) + " sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    Eigensystem es;
    es.eigenvalues.reserve(n);
    es.eigenvectors.reserve(n);
    for (std::size_t idx : order) {
        es.eigenvalues.push_back(a(idx, idx).real());
        ComplexVector col = v.column(idx);
        fix_global_phase(col);
        es.eigenvectors.push_back(std::move(col));
    }
    return es;
}

namespace {

// Subtracts the projection of w onto each vector in basis, twice.
void orthogonalize(ComplexVector& w, std::span<const ComplexVector> basis, ComplexVector* coefficients = nullptr) {
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const Complex r = inner(basis[i], w);
            for (std::size_t k = 0; k < w.size(); ++k) w[k] -= r * basis[i][k];
            if (coefficients) (*coefficients)[i] += r;
        }
    }
}

}  // namespace

UnitaryMatrix haar_unitary(std::size_t dim, Rng& rng) {
    if (dim == 0) throw DimMismatch("haar_unitary requires dim >= 1");
    for (;;) {
        std::vector<ComplexVector> q;
        std::vector<Complex> r_diag;
        q.reserve(dim);
        bool ok = true;
        for (std::size_t j = 0; j < dim; ++j) {
            ComplexVector z(dim);
            for (auto& x : z) x = rng.complex_normal();
            ComplexVector r_col(j, 0.0);
            orthogonalize(z, q, &r_col);
            const double rjj = norm(z);
            if (!(rjj > 1e-10)) {
                ok = false;
                break;
            }
            for (auto& x : z) x /= rjj;
            q.push_back(std::move(z));
            r_diag.emplace_back(rjj);
        }
        if (!ok) continue;
        // Q <- Q diag(r_jj / |r_jj|)
        for (std::size_t j = 0; j < dim; ++j) {
            const Complex lambda = r_diag[j] / std::abs(r_diag[j]);
            for (auto& x : q[j]) x *= lambda;
        }
        try {
            return UnitaryMatrix(ComplexMatrix::from_columns(q));
        } catch (const NotUnitary&) {
            continue;
        }
    }
}

UnitaryMatrix complete_basis(std::span<const Complex> v) {
    const double len = norm(v);
    if (!(len > tol::kZeroVector)) throw ZeroVector("complete_basis requires a nonzero vector");
    const std::size_t n = v.size();
    std::vector<ComplexVector> cols;
    cols.reserve(n);
    ComplexVector first(v.begin(), v.end());
    for (auto& x : first) x /= len;
    cols.push_back(std::move(first));
    for (std::size_t i = 0; i < n && cols.size() < n; ++i) {
        ComplexVector w(n, 0.0);
        w[i] = 1.0;
        orthogonalize(w, cols);
        const double wn = norm(w);
        if (wn < tol::kBasisSkip) continue;
        for (auto& x : w) x /= wn;
        cols.push_back(std::move(w));
    }
    return UnitaryMatrix(ComplexMatrix::from_columns(cols));
}

}  // namespace bornlab
