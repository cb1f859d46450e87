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

// Doubly-symmetric 3-tensors and their orthogonal families.
//
// A doubly-symmetric tensor is exactly one of the form
//   S(x) = sum_v |v|^{-2} <v, x> v (x) v
// for an orthogonal family of non-zero vectors v, which are then the only
// non-zero solutions of S(v) = v (x) v.

#pragma once

#include <cstdint>
#include <vector>

#include "obtuse/obtuse_core.hpp"
#include "obtuse/tensor3.hpp"

namespace obtuse {

struct DiagResult {
  std::vector<ComplexVector> vectors;  ///< orthogonal, not normalized
  std::vector<double> weights;         ///< 1 / |v|^2
  double residual = 0;                 ///< max |tensor_from_family(vectors) - S|
};

/// S^{ij}_k = sum_v |v|^{-2} v^i v^j conj(v^k). Throws NotOrthogonal.
Tensor3 tensor_from_family(const std::vector<ComplexVector>& family,
                           bool constant_coordinate = false,
                           double tol = kDefaultTol);

/// Recovers the orthogonal family of a doubly-symmetric tensor.
///
/// For a random probe w, S(w) = sum_m <v_m, w> a_m a_m^t with a_m = v_m/|v_m|,
/// which is a Takagi form. The Takagi vectors are the a_m up to phase and
/// v_m = (a^* S(a) conj(a)) a fixes the phase. A probe giving two directions
/// the same modulus is rejected by the reconstruction check and redrawn.
/// Output is sorted by descending norm.
///
/// Throws NotDoublySymmetric or NoConvergence.
DiagResult diagonalize(const Tensor3& s, double tol = kDefaultTol, std::uint64_t seed = 0);

/// The obtuse system hidden in a tensor satisfying S^{i0}_k = delta_ik.
/// Throws WrongCount unless there are exactly N+1 fixed points, all with
/// first coordinate 1.
ObtuseSystem obtuse_fixed_points(const Tensor3& s, double tol = kDefaultTol,
                                 std::uint64_t seed = 0);

/// (U o T)^{ij}_k = sum u_im u_jn conj(u_kp) T^{mn}_p. A unitary on C^N
/// acting on a tensor with constant coordinate is extended by U e_0 = e_0.
Tensor3 transform(const ComplexMatrix& u, const Tensor3& t, double tol = kDefaultTol);

/// Block extension diag(1, U).
ComplexMatrix extend_unitary(const ComplexMatrix& u);

/// max |S^{ij}_k - S^{kj}_i|.
double real_criterion_residual(const Tensor3& s);
bool is_real_tensor(const Tensor3& s, double tol = kDefaultTol);

struct RealificationResult {
  ComplexMatrix v;           ///< unitary on C^N with V V^t = S_0
  Tensor3 r;                 ///< V^* o S
  ObtuseSystem real_system;  ///< fixed points of R
  double s0_residual = 0;    ///< max |V V^t - S_0|
};

/// Writes an obtuse tensor as V o R with R the tensor of a real variable.
/// Throws S0NotUnitary when the S_0 block is not symmetric unitary.
RealificationResult realify(const Tensor3& s, double tol = kDefaultTol, std::uint64_t seed = 0);

struct Triangularization {
  ComplexMatrix u;                         ///< w_i = U v_i
  std::vector<ComplexVector> triangular;   ///< w_i^k = 0 for k > i (0-based)
};

/// Unitary making the first N values upper triangular (QR of [v_1 .. v_N]).
Triangularization triangularize_system(const ObtuseSystem& system,
                                       double tol = kDefaultTol);

struct PhaseExtraction {
  ComplexVector phases;  ///< unit-modulus phi_k
  ObtuseSystem real_system;
  double max_imag = 0;   ///< imaginary residue removed when building real_system
};

/// Row k of a triangular obtuse system has a common argument phi_k; dividing
/// it out leaves a real obtuse system. Throws NotObtuse.
PhaseExtraction extract_phases(const std::vector<ComplexVector>& triangular,
                               double tol = kDefaultTol);

/// Composite unitary diag(conj(phi)) U of the constructive realification.
ComplexMatrix realifying_unitary(const Triangularization& tri, const PhaseExtraction& ph);

}  // namespace obtuse
