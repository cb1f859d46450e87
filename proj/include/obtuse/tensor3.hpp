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

#include <vector>

#include "obtuse/types.hpp"

namespace obtuse {

/// Dense 3-tensor S^{ij}_k on C^D.
///
/// The first two indices are the "upper" pair (i, j) and the last one is the
/// contracted index k, so that S(x)^{ij} = sum_k S^{ij}_k x^k. When
/// `constant_coordinate()` is set, index 0 stands for the constant random
/// variable X^0 = 1 and the tensor lives on C^{N+1} with N = dim() - 1.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(std::size_t dim, bool constant_coordinate = false);

  std::size_t dim() const noexcept { return dim_; }
  bool constant_coordinate() const noexcept { return constant_coordinate_; }
  void set_constant_coordinate(bool flag) noexcept { constant_coordinate_ = flag; }

  Complex& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * dim_ + j) * dim_ + k];
  }
  const Complex& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * dim_ + j) * dim_ + k];
  }

  /// (S(x))^{ij} = sum_k S^{ij}_k x^k.
  ComplexMatrix eval(const ComplexVector& x) const;

  /// The symmetric matrix (S^{ij}_k)_{i,j} for a fixed lower index k.
  ComplexMatrix lower_slice(std::size_t k) const;

  /// Sub-tensor on the indices {1..D-1}; drops the constant coordinate.
  Tensor3 restricted() const;

  /// Largest entry modulus.
  double max_abs() const;
  bool all_finite() const;

  Tensor3 operator-(const Tensor3& other) const;
  Tensor3 scaled(Complex factor) const;

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  std::size_t dim_ = 0;
  bool constant_coordinate_ = false;
  std::vector<Complex> data_;
};

/// S(x) as a free function; throws DimensionMismatch on size errors.
ComplexMatrix eval(const Tensor3& s, const ComplexVector& x);

}  // namespace obtuse
