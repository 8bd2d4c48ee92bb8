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

#include "bornlab/orthant.hpp"

#include <cmath>
#include <string>

#include "bornlab/errors.hpp"
#include "bornlab/tolerances.hpp"

namespace bornlab {

ModulusVector::ModulusVector(std::vector<double> moduli) : a_(std::move(moduli)) {
    if (a_.empty()) throw DimMismatch("modulus vector must be non-empty");
    double sum = 0.0;
    for (double x : a_) {
        if (!(x >= 0.0)) throw NotOnOrthant("modulus vector has a negative or NaN entry");
        sum += x * x;
    }
    if (!(std::abs(sum - 1.0) <= tol::kNormalization)) {
        throw NotOnOrthant("modulus vector is off the unit orthant: sum a_i^2 = " + std::to_string(sum));
    }
}

ModulusVector ModulusVector::normalized(std::vector<double> values) {
    double sum = 0.0;
    for (double x : values) sum += x * x;
    if (!(sum > 0.0)) throw ZeroVector("cannot project a zero vector onto the orthant");
    const double len = std::sqrt(sum);
    for (double& x : values) x /= len;
    return ModulusVector(std::move(values));
}

ModulusVector ModulusVector::uniform(std::size_t dim) {
    return ModulusVector(std::vector<double>(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
}

}  // namespace bornlab
