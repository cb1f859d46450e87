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

// Time-step rescaling of obtuse tensors and the normal martingale obtained
// in the limit h -> 0.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "obtuse/obtuse_core.hpp"
#include "obtuse/tensor3.hpp"

namespace obtuse {

/// hat S^{ij}_k = h^{e_i + e_j - e_k} S^{ij}_k, e_0 = 1, e_i = 1/2 otherwise.
/// This is the tensor of the increments sqrt(h) X with the time coordinate h.
Tensor3 rescale_tensor(const Tensor3& s, double h);

struct TensorSample {
  double h = 0;
  Tensor3 s;
};

/// Samples of h -> S(h) at strictly decreasing steps.
using TensorFamily = std::vector<TensorSample>;

/// h0 * 4^{-k}, k = 0 .. count-1.
std::vector<double> geometric_grid(double h0 = 0.1, std::size_t count = 5);

TensorFamily sample_family(const std::function<Tensor3(double)>& s_of_h,
                           const std::vector<double>& steps);

struct LimitEstimate {
  Tensor3 m;  ///< on {0..N}; only M^{ij}_0 and M^{ij}_k with i,j,k >= 1 can be non-zero
  /// Smallest ratio |d_{r}| / |d_{r+1}| between successive extrapolant
  /// differences that was not already below the noise floor (inf if none).
  double min_contraction = 0;
  double error_estimate = 0;  ///< largest final extrapolant difference
};

/// Polynomial extrapolation in sqrt(h) of the rescaled entries to h = 0.
/// Entries forced to vanish in the limit are set to zero, not estimated, and
/// estimates below 1e-10 times the sample magnitude are reported as zero.
/// Throws NoApparentLimit naming the first entry whose successive
/// differences do not shrink by a factor 2.
LimitEstimate limit_tensor(const TensorFamily& family, double tol = kDefaultTol);

struct LimitSymmetryReport {
  double sym1 = 0, sym2 = 0, sym3 = 0;  ///< on indices {1..N}
  double lambda_symmetry = 0;
  double lambda_unitarity = 0;
  double ml = 0;   ///< sum_m M^{ij}_m L^{mk} symmetric in (i, k)
  double sbl = 0;  ///< sum_m conj(M^{km}_j) L^{im} = M^{ij}_k
  double tol = kDefaultTol;

  bool ok() const {
    return sym1 <= tol && sym2 <= tol && sym3 <= tol && lambda_symmetry <= tol &&
           lambda_unitarity <= tol && ml <= tol && sbl <= tol;
  }
};

/// Checks the relations satisfied by the limit of a rescaled obtuse family.
/// `m` is the full tensor on {0..N} returned by limit_tensor.
LimitSymmetryReport check_limit_symmetries(const Tensor3& m, double tol = kDefaultTol);

/// The block (M^{ij}_0)_{i,j >= 1}.
ComplexMatrix lambda_of(const Tensor3& m);

struct PoissonDirection {
  ComplexVector v;
  double intensity = 0;  ///< 1 / |v|^2
};

/// Law of the limit martingale Z = V W with W a real process whose jumps
/// live on the real pre-images of the Poisson directions.
struct LimitSpec {
  std::size_t dim = 0;
  Tensor3 m;                           ///< restricted to {1..N}
  ComplexMatrix lambda;
  ComplexMatrix v;                     ///< unitary, V V^t = lambda, Re(V) symmetric psd
  std::vector<PoissonDirection> poisson;
  std::vector<ComplexVector> brownian; ///< V times a real orthonormal basis of the complement
};

/// Splits the limit into compensated Poisson and Brownian directions.
/// Throws NotDoublySymmetric when the relations fail, InconsistentCount when
/// the Poisson directions do not come from real vectors under V.
LimitSpec classify(const Tensor3& m, double tol = kDefaultTol, std::uint64_t seed = 0);

/// Rebuilds the full tensor on {0..N} (M^{ij}_0 = lambda) from a spec.
Tensor3 full_limit_tensor(const LimitSpec& spec);

}  // namespace obtuse
