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

#include "obtuse/tensor3.hpp"

#include <algorithm>
#include <cmath>

namespace obtuse {

Tensor3::Tensor3(std::size_t dim, bool constant_coordinate)
    : dim_(dim), constant_coordinate_(constant_coordinate), data_(dim * dim * dim) {}

ComplexMatrix Tensor3::eval(const ComplexVector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector of size " + std::to_string(x.size()) + " applied to a tensor on C^" +
                    std::to_string(dim_));
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      Complex acc = 0;
      for (std::size_t k = 0; k < dim_; ++k) acc += (*this)(i, j, k) * x(k);
      out(i, j) = acc;
    }
  return out;
}

ComplexMatrix Tensor3::lower_slice(std::size_t k) const {
  if (k >= dim_) throw Error(ErrorCode::IndexOutOfRange, "slice " + std::to_string(k));
  ComplexMatrix out(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(i, j) = (*this)(i, j, k);
  return out;
}

Tensor3 Tensor3::restricted() const {
  if (dim_ == 0) return {};
  Tensor3 out(dim_ - 1, false);
  for (std::size_t i = 1; i < dim_; ++i)
    for (std::size_t j = 1; j < dim_; ++j)
      for (std::size_t k = 1; k < dim_; ++k) out(i - 1, j - 1, k - 1) = (*this)(i, j, k);
  return out;
}

double Tensor3::max_abs() const {
  double m = 0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool Tensor3::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

Tensor3 Tensor3::operator-(const Tensor3& other) const {
  if (other.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "tensor difference");
  Tensor3 out(*this);
  for (std::size_t n = 0; n < data_.size(); ++n) out.data_[n] -= other.data_[n];
  return out;
}

Tensor3 Tensor3::scaled(Complex factor) const {
  Tensor3 out(*this);
  for (auto& z : out.data_) z *= factor;
  return out;
}

ComplexMatrix eval(const Tensor3& s, const ComplexVector& x) { return s.eval(x); }

}  // namespace obtuse
