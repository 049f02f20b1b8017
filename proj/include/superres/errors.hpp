// Copyright 2026 The superres Authors
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

#ifndef SUPERRES_ERRORS_HPP
#define SUPERRES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace superres {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A value failed one of its type invariants. The message names the invariant.
class ValidationError : public Error {
   public:
    using Error::Error;
};

/// Caller supplied an argument outside the accepted range.
class InputError : public Error {
   public:
    using Error::Error;
};

/// Parameter vector outside a family's declared domain.
class DomainError : public Error {
   public:
    using Error::Error;
};

/// A structural precondition of an algorithm does not hold.
class PreconditionError : public Error {
   public:
    using Error::Error;
};

/// Pulse spacing with omega*tau at an odd multiple of pi.
class SingularSpacingError : public Error {
   public:
    using Error::Error;
};

/// Fisher information of a two-outcome model at p in {0, 1}.
class SingularityError : public Error {
   public:
    using Error::Error;
};

/// Detuning scan that never reaches the resonance dip.
class ScanFailedError : public Error {
   public:
    using Error::Error;
};

/// Numerical procedure produced no usable answer.
class NumericalError : public Error {
   public:
    using Error::Error;
};

}  // namespace superres

#endif
