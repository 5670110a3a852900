/* Copyright 2026 The Spindle Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <stdexcept>
#include <string>

namespace spindle {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape/size mismatch between operands (non-square input, incompatible dims).
struct DimensionError : Error {
  using Error::Error;
};

// Malformed arguments: bad names, unparsable strings, out-of-range scalars.
struct ValueError : Error {
  using Error::Error;
};

// Physically invalid request (non-Hermitian input where Hermitian required,
// dissipative evolution of a ket, inseparable subsystem, ...).
struct DomainError : Error {
  using Error::Error;
};

// Valid physics, but outside the implemented model range.
struct UnsupportedError : DomainError {
  using DomainError::DomainError;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace spindle
