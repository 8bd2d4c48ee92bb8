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
#include <span>
#include <vector>

namespace bornlab {

/// Point on the unit orthant: non-negative entries with sum of squares 1.
/// These are the moduli |alpha_i| of a state's expansion coefficients.
class ModulusVector {
   public:
    /// Throws NotOnOrthant if any entry is negative or |sum a_i^2 - 1| > tol::kNormalization.
    explicit ModulusVector(std::vector<double> moduli);

    /// Scales a non-negative, nonzero vector onto the unit orthant.
    static ModulusVector normalized(std::vector<double> values);
    /// (1, ..., 1) / sqrt(d)
    static ModulusVector uniform(std::size_t dim);

    std::size_t dim() const { return a_.size(); }
    double operator[](std::size_t i) const { return a_[i]; }
    std::span<const double> values() const { return a_; }
    const std::vector<double>& vector() const { return a_; }

    friend bool operator==(const ModulusVector&, const ModulusVector&) = default;

   private:
    std::vector<double> a_;
};

}  // namespace bornlab
