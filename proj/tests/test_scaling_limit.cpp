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
#include <limits>

#include <Eigen/Eigenvalues>

#include "obtuse/catalog.hpp"
#include "obtuse/scaling_limit.hpp"
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

ComplexVector vec2(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  return v;
}

// E[X X^t] straight from the atoms.
ComplexMatrix pseudo_covariance(const ObtuseSystem& sys) {
  ComplexMatrix out = ComplexMatrix::Zero(sys.dim(), sys.dim());
  for (std::size_t m = 0; m < sys.size(); ++m) {
    out += sys.probability(m) * sys.value(m) * sys.value(m).transpose();
  }
  return out;
}

TensorFamily family_of(ObtuseSystem (*law)(double)) {
  return sample_family([law](double h) { return tensor_of(law(h)); }, geometric_grid());
}

ObtuseSystem constant_law(double) { return catalog::three_point_system(); }

TEST(Rescale, ScalesByPowersOfH) {
  const Tensor3 s = tensor_of(catalog::three_point_system());
  const double h = 0.09;
  const Tensor3 r = rescale_tensor(s, h);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        const double e = (i == 0 ? 1.0 : 0.5) + (j == 0 ? 1.0 : 0.5) - (k == 0 ? 1.0 : 0.5);
        EXPECT_LE(std::abs(r(i, j, k) - std::pow(h, e) * s(i, j, k)), 1e-15);
      }
  EXPECT_EQ(code_of([&] { rescale_tensor(s, 0.0); }), ErrorCode::NonPositiveStep);
}

TEST(Rescale, IsTheTensorOfTheScaledIncrement) {
  // Products of sqrt(h) X^i with the time coordinate h expand in the same
  // coordinates with the rescaled coefficients.
  const auto sys = catalog::three_point_system();
  const double h = 0.04;
  const Tensor3 r = rescale_tensor(tensor_of(sys), h);
  for (std::size_t m = 0; m < sys.size(); ++m) {
    ComplexVector y(3);
    y << h, std::sqrt(h) * sys.value(m);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        Complex rhs = 0;
        for (std::size_t k = 0; k < 3; ++k) rhs += r(i, j, k) * y(k);
        EXPECT_LE(std::abs(y(i) * y(j) - rhs), 1e-12);
      }
  }
}

TEST(Grid, Geometric) {
  const auto g = geometric_grid();
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g[0], 0.1);
  EXPECT_DOUBLE_EQ(g[4], 0.1 / 256);
}

TEST(Limit, ConstantWalk) {
  const auto est = limit_tensor(family_of(constant_law));
  const Tensor3 red = est.m.restricted();
  EXPECT_LE(red.max_abs(), 1e-12);
  EXPECT_LE(max_abs(lambda_of(est.m) - testing::constant_walk_lambda()), 1e-12);
  EXPECT_LE(max_abs(lambda_of(est.m) - pseudo_covariance(catalog::three_point_system())), 1e-12);
  EXPECT_TRUE(check_limit_symmetries(est.m).ok());

  const auto spec = classify(est.m);
  EXPECT_TRUE(spec.poisson.empty());
  ASSERT_EQ(spec.brownian.size(), 2u);
  EXPECT_LE(max_abs(spec.v * spec.v.transpose() - spec.lambda), 1e-12);
  EXPECT_LE(unitarity_defect(spec.v), 1e-12);
}

TEST(Limit, PoissonBrownianWalk) {
  const auto est = limit_tensor(family_of(catalog::poisson_brownian_system));
  EXPECT_GE(est.min_contraction, 2.0);
  const ComplexVector w = vec2(1.0, I) / std::sqrt(2.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_LE(std::abs(est.m(i + 1, j + 1, k + 1) - w(i) * w(j) * std::conj(w(k))), 1e-8);
      }
  // Lambda does not depend on h here
  EXPECT_LE(max_abs(lambda_of(est.m) - pseudo_covariance(catalog::poisson_brownian_system(0.01))),
            1e-9);
  ComplexMatrix l(2, 2);
  l << 0.0, I, I, 0.0;
  EXPECT_LE(max_abs(lambda_of(est.m) - l), 1e-9);

  const auto spec = classify(est.m);
  ASSERT_EQ(spec.poisson.size(), 1u);
  EXPECT_LE(testing::set_distance({spec.poisson[0].v}, {w}), 1e-8);
  EXPECT_NEAR(spec.poisson[0].intensity, 1.0, 1e-8);
  ASSERT_EQ(spec.brownian.size(), 1u);
  const ComplexVector b = vec2(I, 1.0) / std::sqrt(2.0);
  EXPECT_LE(std::min((spec.brownian[0] - b).norm(), (spec.brownian[0] + b).norm()), 1e-8);
}

TEST(Limit, RescaledEntriesApproachTheLimit) {
  const auto est = limit_tensor(family_of(catalog::poisson_brownian_system));
  double previous = std::numeric_limits<double>::infinity();
  for (double h : {1e-2, 1e-4, 1e-6}) {
    const Tensor3 r = rescale_tensor(tensor_of(catalog::poisson_brownian_system(h)), h);
    double err = 0;
    for (std::size_t i = 1; i < 3; ++i)
      for (std::size_t j = 1; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) err = std::max(err, std::abs(r(i, j, k) - est.m(i, j, k)));
    EXPECT_LT(err, previous);
    EXPECT_LE(err, 10 * std::sqrt(h));
    previous = err;
  }
}

TEST(Limit, DivergentFamily) {
  TensorFamily fam;
  for (double h : geometric_grid()) {
    Tensor3 s(3);
    s(1, 1, 0) = 1.0 / h;
    fam.push_back({h, s});
  }
  EXPECT_EQ(code_of([&] { limit_tensor(fam); }), ErrorCode::NoApparentLimit);
}

TEST(Limit, BadSampling) {
  auto fam = family_of(constant_law);
  EXPECT_EQ(code_of([&] { limit_tensor(TensorFamily(fam.begin(), fam.begin() + 2)); }),
            ErrorCode::InvalidArgument);
  std::swap(fam[1], fam[2]);
  EXPECT_EQ(code_of([&] { limit_tensor(fam); }), ErrorCode::InvalidArgument);
}

// Random limit structure: Lambda = V V^t, jumps along V r_a for a real
// orthonormal set r_a, scaled by real factors.
struct RandomLimit {
  Tensor3 m;
  ComplexMatrix lambda;
  std::vector<ComplexVector> jumps;
};

RandomLimit random_limit(std::size_t n, std::size_t n_jumps, Rng& rng) {
  const ComplexMatrix v = testing::random_unitary(n, rng);
  const RealMatrix o = testing::random_orthogonal(n, rng);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  RandomLimit out;
  out.lambda = v * v.transpose();
  for (std::size_t a = 0; a < n_jumps; ++a) {
    out.jumps.push_back(scale(rng) * (v * o.col(a).cast<Complex>()));
  }
  out.m = Tensor3(n + 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out.m(i + 1, j + 1, 0) = out.lambda(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        Complex z = 0;
        for (const auto& w : out.jumps) z += w(i) * w(j) * std::conj(w(k)) / w.squaredNorm();
        out.m(i + 1, j + 1, k + 1) = z;
      }
    }
  return out;
}

TEST(Classify, RandomLimitStructures) {
  Rng rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const std::size_t n_jumps = trial % (n + 1);
    const auto lim = random_limit(n, n_jumps, rng);
    EXPECT_TRUE(check_limit_symmetries(lim.m, 1e-10).ok());
    const auto spec = classify(lim.m, 1e-9, trial);
    ASSERT_EQ(spec.poisson.size(), n_jumps);
    ASSERT_EQ(spec.brownian.size(), n - n_jumps);
    std::vector<ComplexVector> got;
    for (const auto& p : spec.poisson) {
      got.push_back(p.v);
      EXPECT_NEAR(p.intensity, 1.0 / p.v.squaredNorm(), 1e-12);
    }
    EXPECT_LE(testing::set_distance(got, lim.jumps), 1e-8);
    // Brownian directions: unit, orthogonal to the jumps and to each other,
    // and real under V^*.
    for (std::size_t b = 0; b < spec.brownian.size(); ++b) {
      EXPECT_NEAR(spec.brownian[b].norm(), 1.0, 1e-10);
      EXPECT_LE(max_abs((spec.v.adjoint() * spec.brownian[b]).imag()), 1e-9);
      for (const auto& w : lim.jumps) EXPECT_LE(std::abs(w.dot(spec.brownian[b])), 1e-9);
      for (std::size_t c = b + 1; c < spec.brownian.size(); ++c) {
        EXPECT_LE(std::abs(spec.brownian[c].dot(spec.brownian[b])), 1e-9);
      }
    }
    EXPECT_LE((full_limit_tensor(spec) - lim.m).max_abs(), 1e-12);
    // canonical branch: Re(V) symmetric positive semi-definite
    const RealMatrix re = spec.v.real();
    EXPECT_LE((re - re.transpose()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<RealMatrix>(re).eigenvalues().minCoeff(), -1e-9);
    EXPECT_LE(max_abs(classify(lim.m, 1e-9, trial + 1000).v - spec.v), 1e-8);
  }
}

TEST(Classify, PureBrownian) {
  Tensor3 m(4);
  for (std::size_t i = 1; i < 4; ++i) m(i, i, 0) = 1.0;
  const auto spec = classify(m);
  EXPECT_TRUE(spec.poisson.empty());
  EXPECT_EQ(spec.brownian.size(), 3u);
  EXPECT_LE(max_abs(spec.v - ComplexMatrix::Identity(3, 3)), 1e-12);
}

TEST(Classify, PerturbedLambdaIsNotUnitary) {
  const auto est = limit_tensor(family_of(constant_law));
  Tensor3 m = est.m;
  m(1, 1, 0) *= 1.1;
  const auto r = check_limit_symmetries(m);
  EXPECT_GT(r.lambda_unitarity, 1e-3);
  EXPECT_LE(r.lambda_symmetry, 1e-12);
}

TEST(Classify, RejectsBrokenRelations) {
  Rng rng(2);
  auto lim = random_limit(3, 1, rng);
  lim.m(1, 1, 0) *= 1.5;
  EXPECT_FALSE(check_limit_symmetries(lim.m).ok());
  EXPECT_EQ(code_of([&] { classify(lim.m); }), ErrorCode::NotDoublySymmetric);

  // jump direction not real under any V with V V^t = Lambda: breaks S-bar-L
  auto other = random_limit(2, 1, rng);
  const ComplexVector w = vec2(1.0, 0.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        other.m(i + 1, j + 1, k + 1) = w(i) * w(j) * std::conj(w(k));
      }
  other.m(1, 1, 0) = I;
  other.m(2, 2, 0) = 1.0;
  other.m(1, 2, 0) = other.m(2, 1, 0) = 0.0;
  EXPECT_GT(check_limit_symmetries(other.m).sbl, 0.1);
  EXPECT_EQ(code_of([&] { classify(other.m); }), ErrorCode::NotDoublySymmetric);
}

}  // namespace
}  // namespace obtuse
