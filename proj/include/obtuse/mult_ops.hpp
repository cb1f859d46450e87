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

// Multiplication operators in the orthonormal basis {X^0 = 1, X^1, ..., X^N}
// of L^2 of an obtuse variable, and their ampliations to finite chains.
//
// Layout: column j of mult_op(S, i) is the expansion of X^i X^j, so the
// matrix entry (k, j) is S^{ij}_k.

#pragma once

#include <Eigen/SparseCore>

#include <cstddef>
#include <vector>

#include "obtuse/obtuse_core.hpp"
#include "obtuse/tensor3.hpp"

namespace obtuse {

using SparseComplexMatrix = Eigen::SparseMatrix<Complex>;

/// Largest chain dimension (N+1)^n accepted by chain_mult_op.
inline constexpr std::size_t kMaxChainDim = std::size_t{1} << 16;

/// a^j_k: the matrix unit sending e_j to e_k (entry (k, j) equal to 1).
ComplexMatrix basis_matrix(std::size_t dim, std::size_t j, std::size_t k);

/// sum_{j,k} S^{ij}_k a^j_k. Throws IndexOutOfRange.
ComplexMatrix mult_op(const Tensor3& s, std::size_t i);

/// sum_{j,k} conj(S^{ik}_j) a^j_k, the operator of multiplication by conj(X^i).
ComplexMatrix conj_mult_op(const Tensor3& s, std::size_t i);

/// Multiplication by X^i computed from the atoms: W diag(X^i) W^* where
/// W_{k,m} = sqrt(p_m) conj(X^k(m)) maps L^2(atoms) to the {X^k} basis.
ComplexMatrix direct_mult_op(const ObtuseRV& rv, std::size_t i);

/// One factor of a monomial: X^index, or its conjugate.
struct Factor {
  std::size_t index = 0;
  bool conjugate = false;
};

struct Monomial {
  Complex coeff{1.0, 0.0};
  std::vector<Factor> factors;
};

using Polynomial = std::vector<Monomial>;

/// <X^0, f(M_{X^1}, ..., M_{X^N}, adjoints) X^0>.
Complex expectation_functional(const Tensor3& s, const Polynomial& f);

/// sum_m p_m f(v_m, conj(v_m)), the same expectation straight from the atoms.
Complex expectation_direct(const ObtuseRV& rv, const Polynomial& f);

/// Multiplication by coordinate i of Z_{nh} = sum_{m <= n} h^{eps_i} X_m on the
/// n-site chain, with eps_0 = 1 and eps_i = 1/2 otherwise. Site 1 is the most
/// significant tensor factor. Throws ChainTooLarge, NonPositiveStep.
SparseComplexMatrix chain_mult_op(const Tensor3& s, std::size_t i, std::size_t n_sites,
                                  double h);

/// I (x) ... (x) op (x) ... (x) I with op at 0-based position `site`.
SparseComplexMatrix ampliate(const ComplexMatrix& op, std::size_t site, std::size_t n_sites);

}  // namespace obtuse
