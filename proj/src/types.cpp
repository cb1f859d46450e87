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

#include "obtuse/types.hpp"

#include <limits>

namespace obtuse {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotObtuse: return "NotObtuse";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::ProbabilityMismatch: return "ProbabilityMismatch";
    case ErrorCode::AmbiguousMatching: return "AmbiguousMatching";
    case ErrorCode::MinimalSupport: return "MinimalSupport";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::NotDoublySymmetric: return "NotDoublySymmetric";
    case ErrorCode::WrongCount: return "WrongCount";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::S0NotUnitary: return "S0NotUnitary";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ChainTooLarge: return "ChainTooLarge";
    case ErrorCode::NonPositiveStep: return "NonPositiveStep";
    case ErrorCode::NoApparentLimit: return "NoApparentLimit";
    case ErrorCode::InconsistentCount: return "InconsistentCount";
    case ErrorCode::TooFewIncrements: return "TooFewIncrements";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
}

double symmetry_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(m - m.transpose());
}

}  // namespace obtuse
