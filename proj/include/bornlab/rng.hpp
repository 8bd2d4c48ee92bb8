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
#include <cstdint>
#include <random>

namespace bornlab {

/// Caller-owned random stream. Streams are derived from a master seed and a
/// stream index, so work split across threads draws the same numbers as a
/// sequential run.
class Rng {
   public:
    explicit Rng(std::uint64_t seed);

    /// Stream `index` of master seed `seed`.
    static Rng stream(std::uint64_t seed, std::uint64_t index);

    /// Uniform in [0, 1).
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);
    /// Standard normal.
    double normal();
    /// Complex standard normal: real and imaginary parts each N(0, 1/2).
    std::complex<double> complex_normal();

   private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace bornlab
