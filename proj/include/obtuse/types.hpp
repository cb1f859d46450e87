// Copyright 2026 The Obtuse Authors
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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace obtuse {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Absolute tolerance used by validators when the caller does not supply one.
inline constexpr double kDefaultTol = 1e-9;

enum class ErrorCode {
  DimensionMismatch,
  NotObtuse,
  NotNormalized,
  ProbabilityMismatch,
  AmbiguousMatching,
  MinimalSupport,
  SingularSystem,
  NotSymmetric,
  NoConvergence,
  NotCommuting,
  NotOrthogonal,
  NotDoublySymmetric,
  WrongCount,
  NotUnitary,
  S0NotUnitary,
  IndexOutOfRange,
  ChainTooLarge,
  NonPositiveStep,
  NoApparentLimit,
  InconsistentCount,
  TooFewIncrements,
  InvalidArgument,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline Complex conj(Complex z) { return std::conj(z); }

/// Largest entry modulus; 0 for empty inputs.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// max |U*U - I| entrywise.
double unitarity_defect(const ComplexMatrix& u);

/// max |M - M^t| entrywise.
double symmetry_defect(const ComplexMatrix& m);

}  // namespace obtuse
