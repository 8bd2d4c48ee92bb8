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

/// Every numerical threshold used by the library, in one place.
namespace bornlab::tol {

// linalg
inline constexpr double kHermitian = 1e-12;
inline constexpr double kUnitary = 1e-10;
inline constexpr double kEigenResidual = 1e-10;
inline constexpr double kReconstruction = 1e-9;
inline constexpr double kJacobiOffDiagonal = 1e-14;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kZeroVector = 1e-12;
inline constexpr double kBasisSkip = 1e-8;

// states and observables
inline constexpr double kNormalization = 1e-12;
inline constexpr double kEigenvalueSeparation = 1e-8;
inline constexpr double kRandomSpectrumGap = 1e-3;
inline constexpr double kOverlapMatch = 1e-8;

// rules
inline constexpr double kDomainSlack = 1e-12;

// variational
inline constexpr double kFiniteDifferenceStep = 1e-6;
inline constexpr double kBoundaryWeight = 10.0;
inline constexpr double kRankRelative = 1e-10;

// default report thresholds
inline constexpr double kDefect = 1e-12;
inline constexpr double kSpread = 1e-12;
inline constexpr double kStationarity = 1e-6;
inline constexpr double kClosedForm = 1e-15;
inline constexpr double kRecoveryMixed = 1e-3;
inline constexpr double kRecoverySingleDim = 1e-2;
inline constexpr double kRecoveryObjective = 1e-6;

inline constexpr std::size_t kMinDim = 2;
inline constexpr std::size_t kMaxDim = 16;

}  // namespace bornlab::tol
