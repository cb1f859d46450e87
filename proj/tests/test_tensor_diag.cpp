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

#include <gtest/gtest.h>

#include <cmath>

#include "obtuse/catalog.hpp"
#include "obtuse/tensor_diag.hpp"
#include "support/oracles.hpp"

namespace obtuse {
namespace {

using testing::Rng;
const Complex I(0.0, 1.0);

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

std::vector<ComplexVector> hatted_values(const ObtuseSystem& sys) {
  std::vector<ComplexVector> out;
  for (std::size_t i = 0; i < sys.size(); ++i) out.push_back(sys.hatted(i));
  return out;
}

TEST(TensorFromFamily, MatchesObtuseTensor) {
  Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sys = testing::random_obtuse_system(1 + trial % 5, rng);
    const Tensor3 s = tensor_from_family(hatted_values(sys), true);
    EXPECT_LE((s - tensor_of(sys)).max_abs(), 1e-12);
  }
}

TEST(TensorFromFamily, SingleVector) {
  ComplexVector v(2);
  v << 1.0, I;
  const Tensor3 s = tensor_from_family({v});
  // |v|^{-2} v^i v^j conj(v^k) with |v|^2 = 2
  EXPECT_LE(std::abs(s(0, 0, 0) - 0.5), 1e-15);
  EXPECT_LE(std::abs(s(1, 1, 1) - 0.5 * I), 1e-15);
  EXPECT_LE(std::abs(s(0, 1, 1) - 0.5), 1e-15);
}

TEST(TensorFromFamily, Errors) {
  EXPECT_EQ(code_of([] { tensor_from_family({}); }), ErrorCode::InvalidArgument);
  ComplexVector a(2), b(2);
  a << 1.0, 0.0;
  b << 1.0, 1.0;
  EXPECT_EQ(code_of([&] { tensor_from_family({a, b}); }), ErrorCode::NotOrthogonal);
  EXPECT_EQ(code_of([&] { tensor_from_family({a, ComplexVector::Zero(2)}); }),
            ErrorCode::NotOrthogonal);
}

TEST(Diagonalize, RecoversRandomOrthogonalFamilies) {
  Rng rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t dim = 1 + trial % 6;
    const std::size_t count = 1 + (trial / 6) % dim;
    const auto family = testing::random_orthogonal_family(dim, count, rng);
    const auto r = diagonalize(tensor_from_family(family), 1e-9, trial);
    EXPECT_LE(testing::set_distance(r.vectors, family), 1e-8);
    EXPECT_LE(r.residual, 1e-9);
    for (std::size_t m = 0; m + 1 < r.vectors.size(); ++m) {
      EXPECT_GE(r.vectors[m].norm() + 1e-12, r.vectors[m + 1].norm());
    }
    for (std::size_t m = 0; m < r.vectors.size(); ++m) {
      EXPECT_NEAR(r.weights[m], 1.0 / r.vectors[m].squaredNorm(), 1e-12);
    }
  }
}

TEST(Diagonalize, EqualNormsAndZeroTensor) {
  ComplexVector a(3), b(3);
  a << 1.0, I, 0.0;
  b << I, 1.0, 0.0;
  const auto r = diagonalize(tensor_from_family({a, b}));
  EXPECT_LE(testing::set_distance(r.vectors, {a, b}), 1e-9);
  EXPECT_TRUE(diagonalize(Tensor3(3)).vectors.empty());
}

TEST(Diagonalize, FixedPointProperty) {
  Rng rng(3);
  const auto sys = testing::random_obtuse_system(4, rng);
  const Tensor3 s = tensor_of(sys);
  for (const auto& v : diagonalize(s).vectors) {
    EXPECT_LE(max_abs(s.eval(v) - v * v.transpose()), 1e-10);
  }
}

TEST(Diagonalize, RejectsRandomTensor) {
  Rng rng(4);
  std::normal_distribution<double> g;
  Tensor3 s(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) s(i, j, k) = Complex(g(rng), g(rng));
  EXPECT_EQ(code_of([&] { diagonalize(s); }), ErrorCode::NotDoublySymmetric);
}

TEST(FixedPoints, RecoverTheSystem) {
  Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto sys = testing::random_obtuse_system(1 + trial % 6, rng);
    const auto back = obtuse_fixed_points(tensor_of(sys), kDefaultTol, trial);
    EXPECT_LE(testing::set_distance(back.values(), sys.values()), 1e-8);
  }
  const auto three = catalog::three_point_system();
  EXPECT_LE(testing::set_distance(obtuse_fixed_points(tensor_of(three)).values(), three.values()),
            1e-10);
}

TEST(FixedPoints, WrongCount) {
  Rng rng(6);
  const auto sys = testing::random_obtuse_system(3, rng);
  auto hats = hatted_values(sys);
  hats.pop_back();
  EXPECT_EQ(code_of([&] { obtuse_fixed_points(tensor_from_family(hats, true)); }),
            ErrorCode::WrongCount);
}

TEST(Transform, MatchesRotatedSystem) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sys = testing::random_obtuse_system(1 + trial % 5, rng);
    const ComplexMatrix u = testing::random_unitary(sys.dim(), rng);
    const Tensor3 t = transform(u, tensor_of(sys));
    EXPECT_LE((t - tensor_of(rotate(sys, u))).max_abs(), 1e-10);
    EXPECT_LE((transform(extend_unitary(u), tensor_of(sys)) - t).max_abs(), 1e-12);
  }
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2) * 2.0;
  EXPECT_EQ(code_of([&] { transform(bad, tensor_of(catalog::three_point_system())); }),
            ErrorCode::NotUnitary);
}

TEST(RealCriterion, Examples) {
  EXPECT_TRUE(is_real_tensor(tensor_of(catalog::real_bernoulli())));
  EXPECT_FALSE(is_real_tensor(tensor_of(catalog::imaginary_bernoulli())));
  EXPECT_FALSE(is_real_tensor(tensor_of(catalog::three_point_system())));
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::random_probabilities(2 + trial % 5, rng);
    const auto real = real_obtuse_system(p);
    EXPECT_TRUE(is_real_tensor(tensor_of(real)));
    // a real rotation keeps the variable real, a generic unitary does not
    const RealMatrix q = testing::random_orthogonal(real.dim(), rng);
    EXPECT_TRUE(is_real_tensor(tensor_of(rotate(real, q.cast<Complex>()))));
    const ComplexMatrix u = testing::random_unitary(real.dim(), rng);
    EXPECT_FALSE(is_real_tensor(tensor_of(rotate(real, u)), 1e-6));
  }
}

TEST(Realify, RandomSystems) {
  Rng rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const auto sys = testing::random_obtuse_system(1 + trial % 6, rng);
    const Tensor3 s = tensor_of(sys);
    const auto r = realify(s, kDefaultTol, trial);
    EXPECT_LE(unitarity_defect(r.v), 1e-10);
    EXPECT_LE(r.s0_residual, 1e-10);
    EXPECT_LE(max_abs(r.v * r.v.transpose() - s.lower_slice(0).bottomRightCorner(sys.dim(), sys.dim())),
              1e-10);
    EXPECT_TRUE(is_real_tensor(r.r));
    EXPECT_TRUE(r.real_system.is_real(1e-9));
    EXPECT_LE((transform(r.v, r.r) - s).max_abs(), 1e-10);
    EXPECT_LE((tensor_of(r.real_system) - r.r).max_abs(), 1e-9);
  }
}

TEST(Realify, ImaginaryBernoulli) {
  const auto r = realify(tensor_of(catalog::imaginary_bernoulli()));
  EXPECT_NEAR(std::abs(r.v(0, 0)), 1.0, 1e-12);
  EXPECT_LE(std::abs(r.v(0, 0) * r.v(0, 0) + 1.0), 1e-12);
  EXPECT_TRUE(r.real_system.is_real());
}

TEST(Realify, RejectsNonUnitaryS0) {
  Tensor3 s = tensor_of(catalog::three_point_system());
  s(1, 1, 0) *= 2.0;
  EXPECT_EQ(code_of([&] { realify(s); }), ErrorCode::S0NotUnitary);
}

TEST(Constructive, TriangularizeAndExtractPhases) {
  Rng rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    const auto sys = testing::random_obtuse_system(1 + trial % 6, rng);
    const auto tri = triangularize_system(sys);
    EXPECT_LE(unitarity_defect(tri.u), 1e-12);
    for (std::size_t i = 0; i < sys.dim(); ++i) {
      for (std::size_t k = i + 1; k < sys.dim(); ++k) {
        EXPECT_LE(std::abs((tri.u * sys.value(i))(k)), 1e-10);
      }
    }
    const auto ph = extract_phases(tri.triangular);
    EXPECT_LE(ph.max_imag, 1e-10);
    EXPECT_TRUE(ph.real_system.is_real(0.0));
    const ComplexMatrix w = realifying_unitary(tri, ph);
    for (std::size_t i = 0; i < sys.size(); ++i) {
      EXPECT_LE(max_abs(w * sys.value(i) - ph.real_system.value(i)), 1e-10);
    }
    // the unitary relating S to the real tensor is w^*
    EXPECT_LE((transform(w.adjoint(), tensor_of(ph.real_system)) - tensor_of(sys)).max_abs(),
              1e-10);
  }
}

}  // namespace
}  // namespace obtuse
