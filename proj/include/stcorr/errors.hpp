// Copyright 2026 The stcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace stcorr {

/// Argument outside the domain of an operation (negative time, odd L, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Spatial offset has the wrong parity for the requested correlation kind.
class ParityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Mode lies in the zero-mode orbit, which carries flat (Lebesgue) measure.
class ZeroModeError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Numerical procedure failed to reach its stated accuracy.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Observable does not fit inside the finite torus, or the torus is too
/// large for a dense computation.
class FiniteSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Estimator was asked for data it has not accumulated.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace stcorr
