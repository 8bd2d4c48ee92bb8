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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "bornlab/rng.hpp"
#include "bornlab/tolerances.hpp"

namespace bornlab {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
   public:
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> row_major);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const double> values);
    /// Matrix whose columns are the given vectors.
    static ComplexMatrix from_columns(std::span<const ComplexVector> columns);

    std::size_t dim() const { return dim_; }
    Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const Complex& operator()(std::size_t row, std::size_t col) const {
        return data_[row * dim_ + col];
    }

    ComplexVector column(std::size_t col) const;
    ComplexMatrix adjoint() const;

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v);
    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);

    /// max_ij |M_ij|, NaN if any entry is NaN
    double max_abs() const;
    /// max_ij |M_ij - conj(M_ji)|, NaN if any entry is NaN
    double hermitian_defect() const;
    /// max_ij |(M^dagger M - I)_ij|
    double unitarity_defect() const;

   private:
    std::size_t dim_;
    std::vector<Complex> data_;
};

/// A ComplexMatrix that has been checked to be Hermitian within tol::kHermitian.
class HermitianMatrix {
   public:
    explicit HermitianMatrix(ComplexMatrix m);
    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return m_.dim(); }

   private:
    ComplexMatrix m_;
};

/// A ComplexMatrix that has been checked to be unitary within tol::kUnitary.
class UnitaryMatrix {
   public:
    explicit UnitaryMatrix(ComplexMatrix m);
    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return m_.dim(); }
    ComplexVector apply(std::span<const Complex> v) const { return m_ * v; }

   private:
    ComplexMatrix m_;
};

struct Eigensystem {
    /// Ascending.
    std::vector<double> eigenvalues;
    /// Column i pairs with eigenvalues[i]. Each vector's largest-magnitude
    /// component is real and positive.
    std::vector<ComplexVector> eigenvectors;

    std::size_t dim() const { return eigenvalues.size(); }
    ComplexMatrix eigenvector_matrix() const;
    /// V diag(w) V^dagger
    ComplexMatrix reconstruct() const;
};

struct JacobiOptions {
    int max_sweeps = tol::kJacobiMaxSweeps;
    /// Convergence when the off-diagonal Frobenius norm falls below
    /// off_diagonal_tolerance * max(1, ||M||_F).
    double off_diagonal_tolerance = tol::kJacobiOffDiagonal;
};

/// Cyclic Jacobi eigendecomposition. Throws NonConvergence when the
/// off-diagonal norm does not drop below tolerance within max_sweeps.
Eigensystem eigendecompose(const HermitianMatrix& m, const JacobiOptions& options = {});

/// Haar-distributed unitary: complex Ginibre matrix, QR, diagonal-phase fix.
UnitaryMatrix haar_unitary(std::size_t dim, Rng& rng);

/// Unitary whose first column is v / ||v||; the rest come from Gram-Schmidt
/// against e_0, e_1, ... Throws ZeroVector when ||v|| <= tol::kZeroVector.
UnitaryMatrix complete_basis(std::span<const Complex> v);

Complex inner(std::span<const Complex> a, std::span<const Complex> b);  // <a, b>, conjugate-linear in a
double norm(std::span<const Complex> v);
double norm_squared(std::span<const Complex> v);
/// Overwrite the max-magnitude component's phase to be real positive.
void fix_global_phase(ComplexVector& v);
/// max_i |a_i - e^{i t} b_i| minimized over the global phase t.
double distance_up_to_phase(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace bornlab
