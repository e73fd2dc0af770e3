// Copyright 2026 The qpbc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QPBC_COMMON_HPP
#define QPBC_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace qpbc {

using cdouble = std::complex<double>;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ContractionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SymmetryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qpbc

#endif
