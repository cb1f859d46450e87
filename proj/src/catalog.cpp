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

#include "obtuse/catalog.hpp"

#include <cmath>

namespace obtuse::catalog {

namespace {
const Complex I(0.0, 1.0);

ComplexVector vec2(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  return v;
}
}  // namespace

ObtuseSystem three_point_system() {
  return ObtuseSystem::from_values(
      {vec2(I, 1.0), vec2(1.0, -1.0 + I), -0.2 * vec2(3.0 + 4.0 * I, 1.0 + 3.0 * I)});
}

ObtuseSystem real_bernoulli() {
  return ObtuseSystem::from_values({ComplexVector::Constant(1, 1.0),
                                    ComplexVector::Constant(1, -1.0)});
}

ObtuseSystem imaginary_bernoulli() {
  return ObtuseSystem::from_values({ComplexVector::Constant(1, I),
                                    ComplexVector::Constant(1, -I)});
}

ObtuseSystem poisson_brownian_system(double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::NonPositiveStep, "h must be positive");
  const double r = std::sqrt(h);
  const double s2 = std::sqrt(2.0);
  return ObtuseSystem::from_values({vec2(I, 1.0) / s2,
                                    vec2(1.0 - I * r, I - r) / std::sqrt(2.0 * h),
                                    -vec2(2.0 * r + I, 1.0 + 2.0 * I * r) / s2},
                                   1e-9 / h);
}

ObtuseSystem drifting_three_point_system(double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::NonPositiveStep, "h must be positive");
  ComplexMatrix u = ComplexMatrix::Identity(2, 2);
  u(0, 0) = std::polar(1.0, std::sqrt(h));
  return rotate(three_point_system(), u);
}

}  // namespace obtuse::catalog
