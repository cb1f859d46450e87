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

#include <cstdint>
#include <vector>

#include "obtuse/types.hpp"

namespace obtuse {

/// M = U diag(d) U^t with U unitary and d >= 0 sorted descending.
struct TakagiResult {
  ComplexMatrix u;
  RealVector d;
  double residual = 0;  ///< max |M - U diag(d) U^t|
};

/// Takagi factorization of a complex symmetric matrix.
///
/// Writing M = A + iC and u = x + iy, the relation M conj(u) = sigma u is the
/// real symmetric eigenproblem [[A, C], [C, -A]] [x; y] = sigma [x; y]. Its
/// spectrum is {+sigma_k, -sigma_k}, so the eigenvectors of the N largest
/// eigenvalues give the Takagi vectors directly, degenerate singular values
/// included. Columns attached to (numerically) zero singular values are
/// replaced by an orthonormal completion.
///
/// Throws NotSymmetric when |M - M^t| > tol, NoConvergence when the residual
/// exceeds tol.
TakagiResult takagi(const ComplexMatrix& m, double tol = kDefaultTol);

/// max ||g h - h g||_max over g, h in {conj(A_i) A_j}.
double commuting_check(const std::vector<ComplexMatrix>& family);

struct SimultaneousTakagiResult {
  ComplexMatrix u;
  std::vector<ComplexVector> diagonals;  ///< D_i = diag(U^* A_i conj(U))
  double residual = 0;                   ///< max_i |U^* A_i conj(U) - D_i|
};

/// Common U with A_i = U D_i U^t for a family of symmetric matrices whose
/// products conj(A_i) A_j commute.
///
/// A random complex combination sum c_i A_i is Takagi-factorized; generic
/// coefficients separate every joint singular value that is not forced equal
/// by the family. Two independent draws must agree on the joint moduli.
/// Each column is rotated so that its first non-zero D_i(k) is real positive,
/// which fixes U up to signs where the joint values are simple. Columns are
/// ordered by descending joint modulus sqrt(sum_i |D_i(k)|^2), ties broken by
/// the phases in [0, 2pi) of D_1(k), D_2(k), ... in turn.
SimultaneousTakagiResult simultaneous_takagi(const std::vector<ComplexMatrix>& family,
                                             double tol = kDefaultTol,
                                             std::uint64_t seed = 0);

}  // namespace obtuse
