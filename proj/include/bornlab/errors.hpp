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

#include <stdexcept>
#include <string>

namespace bornlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

#define BORNLAB_DEFINE_ERROR(Name)        \
    class Name : public Error {           \
       public:                            \
        using Error::Error;               \
    }

BORNLAB_DEFINE_ERROR(NonConvergence);
BORNLAB_DEFINE_ERROR(NotHermitian);
BORNLAB_DEFINE_ERROR(NotUnitary);
BORNLAB_DEFINE_ERROR(ZeroVector);
BORNLAB_DEFINE_ERROR(DimMismatch);
BORNLAB_DEFINE_ERROR(NotNormalized);
BORNLAB_DEFINE_ERROR(NotOnOrthant);
BORNLAB_DEFINE_ERROR(DegenerateSpectrum);
BORNLAB_DEFINE_ERROR(DomainError);
BORNLAB_DEFINE_ERROR(IndexOutOfRange);
BORNLAB_DEFINE_ERROR(RuleError);
BORNLAB_DEFINE_ERROR(NoMatchingOutcome);
BORNLAB_DEFINE_ERROR(RankDeficient);

#undef BORNLAB_DEFINE_ERROR

}  // namespace bornlab
