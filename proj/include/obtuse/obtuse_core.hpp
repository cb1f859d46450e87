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

// Complex obtuse systems and the random variables they carry.
//
// An obtuse system of C^N is a family of N+1 vectors whose pairwise inner
// products (antilinear in the first slot) all equal -1. Giving the value v_i
// the weight p_i = 1 / (1 + |v_i|^2) turns it into a centered, normalized
// random variable taking exactly N+1 values.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "obtuse/tensor3.hpp"
#include "obtuse/types.hpp"

namespace obtuse {

/// Residuals produced while checking a candidate obtuse system.
struct ObtuseValidation {
  std::size_t dim = 0;
  std::vector<double> probabilities;
  /// |<v_i, v_j> + 1| for i < j, row-major over the strict upper triangle.
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>> pair_residuals;
  double probability_sum_residual = 0;  ///< |sum p_i - 1|
  double centering_residual = 0;        ///< |sum p_i v_i|
  double identity_residual = 0;         ///< max |sum p_i |v_i><v_i| - I|
  double tol = kDefaultTol;
  bool valid = false;
  /// Worst pair (0-based) when the system is not obtuse.
  std::optional<std::pair<std::size_t, std::size_t>> offending_pair;

  double max_pair_residual() const;
};

/// Checks the pairwise -1 condition and reports the derived probabilities.
///
/// Throws DimensionMismatch when the count is not dim+1, when vectors have
/// different lengths, or when a vector is zero. A system that fails the
/// inner-product test is reported through `valid` / `offending_pair`.
ObtuseValidation validate_obtuse_system(const std::vector<ComplexVector>& values,
                                        double tol = kDefaultTol);

/// A validated obtuse system, i.e. the law of an obtuse random variable.
class ObtuseSystem {
 public:
  /// Throws NotObtuse (naming the worst pair) or DimensionMismatch.
  static ObtuseSystem from_values(std::vector<ComplexVector> values,
                                  double tol = kDefaultTol);

  /// As above, also checking caller-supplied probabilities against
  /// 1/(1+|v|^2); throws ProbabilityMismatch on disagreement.
  static ObtuseSystem from_values(std::vector<ComplexVector> values,
                                  const std::vector<double>& probabilities,
                                  double tol = kDefaultTol);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return values_.size(); }

  const std::vector<ComplexVector>& values() const noexcept { return values_; }
  const ComplexVector& value(std::size_t i) const { return values_.at(i); }
  const std::vector<double>& probabilities() const noexcept { return probabilities_; }
  double probability(std::size_t i) const { return probabilities_.at(i); }

  /// (1, v_i) in C^{N+1}.
  ComplexVector hatted(std::size_t i) const;

  /// The (N+1)x(N+1) matrix with rows sqrt(p_i) * hatted(i); unitary.
  ComplexMatrix amplitude_matrix() const;

  bool is_real(double tol = kDefaultTol) const;

 private:
  ObtuseSystem(std::size_t dim, std::vector<ComplexVector> values,
               std::vector<double> probabilities)
      : dim_(dim), values_(std::move(values)), probabilities_(std::move(probabilities)) {}

  std::size_t dim_ = 0;
  std::vector<ComplexVector> values_;
  std::vector<double> probabilities_;
};

/// An obtuse random variable is fully described by its system.
using ObtuseRV = ObtuseSystem;

/// A finitely supported random variable in C^d (not necessarily obtuse).
struct DiscreteRV {
  std::vector<ComplexVector> values;
  std::vector<double> probabilities;

  std::size_t dim() const { return values.empty() ? 0 : values.front().size(); }
  std::size_t size() const { return values.size(); }
};

struct CenteringReport {
  bool centered_normalized = false;
  double mean_residual = 0;        ///< |E[X]|
  double covariance_residual = 0;  ///< max |E[conj(X^i) X^j] - delta_ij|
};

/// E[X] = 0 and E[conj(X^i) X^j] = delta_ij within tol.
CenteringReport rv_is_centered_normalized(const DiscreteRV& rv, double tol = kDefaultTol);

/// S^{ij}_k = E[X^i X^j conj(X^k)] with X^0 = 1; the tensor lives on C^{N+1}
/// and has its constant coordinate flag set.
Tensor3 tensor_of(const ObtuseRV& rv);

/// Max residual of X^i X^j = sum_k S^{ij}_k X^k over all atoms and i, j.
double product_identity_residual(const ObtuseRV& rv, const Tensor3& s);

/// Max residual of conj(X^i) X^j = sum_k conj(S^{ik}_j) X^k over all atoms.
double conjugate_identity_residual(const ObtuseRV& rv, const Tensor3& s);

/// Residuals of the four symmetry relations carried by obtuse tensors.
struct SymmetryReport {
  double sym0 = 0;  ///< max |S^{i0}_k - delta_ik|
  double sym1 = 0;  ///< symmetry of S^{ij}_k in (i, j)
  double sym2 = 0;  ///< sum_m S^{im}_j S^{kl}_m symmetric in (i, k)
  double sym3 = 0;  ///< sum_m S^{im}_j conj(S^{lm}_k) symmetric in (i, k)
  bool sym0_checked = false;
  double tol = kDefaultTol;

  bool sym0_ok() const { return !sym0_checked || sym0 <= tol; }
  bool doubly_symmetric() const { return sym1 <= tol && sym2 <= tol && sym3 <= tol; }
  bool ok() const { return sym0_ok() && doubly_symmetric(); }
};

/// Exhaustive sweep of the symmetry relations. sym0 is evaluated only for
/// tensors flagged with a constant coordinate, or when `check_sym0` forces it.
SymmetryReport check_symmetries(const Tensor3& s, double tol = kDefaultTol,
                                std::optional<bool> check_sym0 = std::nullopt);

/// Result of matching two obtuse variables with the same law of atoms.
struct UnitaryRelation {
  ComplexMatrix u;                       ///< Y = U X
  std::vector<std::size_t> permutation;  ///< atom i of X maps to atom permutation[i] of Y
  double residual = 0;                   ///< max_i |U x_i - y_perm(i)|
};

/// Finds the unitary U on C^N with Y = U X, matching atoms by probability.
/// Ties (within 1e-12) are resolved by trying every matching of the tied block.
UnitaryRelation relate_same_probabilities(const ObtuseRV& x, const ObtuseRV& y,
                                          double tol = kDefaultTol);

/// X = A Y with A a d x (n-1) co-isometry (A A^* = I_d).
struct Embedding {
  ComplexMatrix a;
  double last_atom_residual = 0;  ///< the equation left out of the linear solve
  double coisometry_residual = 0; ///< max |A A^* - I|
};

/// Expresses a centered, normalized variable with n atoms as a linear image
/// of an obtuse variable on C^{n-1} with the same atom probabilities.
Embedding embed_general(const DiscreteRV& x, const ObtuseRV& y, double tol = kDefaultTol);

/// The real obtuse system whose amplitude matrix is the Householder
/// reflection sending e_0 to (sqrt(p_i))_i.
ObtuseSystem real_obtuse_system(const std::vector<double>& probabilities);

/// Applies a unitary U on C^N to every value.
ObtuseSystem rotate(const ObtuseSystem& system, const ComplexMatrix& u,
                    double tol = kDefaultTol);

/// Smallest singular value over all strict sub-families (full column rank check).
double min_subfamily_singular_value(const ObtuseSystem& system);

}  // namespace obtuse
