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

#include "obtuse/scaling_limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

#include "obtuse/takagi.hpp"
#include "obtuse/tensor_diag.hpp"

namespace obtuse {

namespace {

double exponent(std::size_t i) { return i == 0 ? 1.0 : 0.5; }

// Values at 0 of the interpolating polynomials through the first r+1 points,
// r = 0 .. n-1 (Neville's scheme).
std::vector<Complex> extrapolants(const std::vector<double>& t, const std::vector<Complex>& f) {
  const std::size_t n = t.size();
  std::vector<Complex> p = f;  // p[a] holds P_{a, a+len}
  std::vector<Complex> out{f[0]};
  for (std::size_t len = 1; len < n; ++len) {
    for (std::size_t a = 0; a + len < n; ++a) {
      const std::size_t b = a + len;
      p[a] = (t[a] * p[a + 1] - t[b] * p[a]) / (t[a] - t[b]);
    }
    out.push_back(p[0]);
  }
  return out;
}

}  // namespace

Tensor3 rescale_tensor(const Tensor3& s, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::NonPositiveStep, "h must be positive");
  const std::size_t d = s.dim();
  Tensor3 out(d, s.constant_coordinate());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        out(i, j, k) = std::pow(h, exponent(i) + exponent(j) - exponent(k)) * s(i, j, k);
  return out;
}

std::vector<double> geometric_grid(double h0, std::size_t count) {
  if (!(h0 > 0.0)) throw Error(ErrorCode::NonPositiveStep, "h0 must be positive");
  std::vector<double> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(h0 * std::pow(4.0, -double(k)));
  return out;
}

TensorFamily sample_family(const std::function<Tensor3(double)>& s_of_h,
                           const std::vector<double>& steps) {
  TensorFamily out;
  for (double h : steps) out.push_back({h, s_of_h(h)});
  return out;
}

LimitEstimate limit_tensor(const TensorFamily& family, double tol) {
  (void)tol;
  if (family.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "limit extraction needs at least 3 samples");
  }
  const std::size_t d = family.front().s.dim();
  for (std::size_t r = 0; r < family.size(); ++r) {
    if (!(family[r].h > 0.0)) throw Error(ErrorCode::NonPositiveStep, "sample step");
    if (r > 0 && !(family[r].h < family[r - 1].h)) {
      throw Error(ErrorCode::InvalidArgument, "sample steps must decrease strictly");
    }
    if (family[r].s.dim() != d) throw Error(ErrorCode::DimensionMismatch, "sample tensors");
  }
  if (d < 2) throw Error(ErrorCode::DimensionMismatch, "tensor must live on C^{N+1}, N >= 1");

  std::vector<double> t;
  for (const auto& smp : family) t.push_back(std::sqrt(smp.h));

  LimitEstimate out;
  out.m = Tensor3(d, false);
  out.min_contraction = std::numeric_limits<double>::infinity();

  auto estimate = [&](std::size_t i, std::size_t j, std::size_t k) {
    std::vector<Complex> f;
    double scale = 1.0;
    for (std::size_t r = 0; r < family.size(); ++r) {
      const Complex raw = family[r].s(i, j, k);
      f.push_back(k == 0 ? raw : t[r] * raw);
      scale = std::max(scale, std::abs(f.back()));
    }
    const auto e = extrapolants(t, f);
    const double floor = 1e-10 * scale;
    std::vector<double> diffs;
    for (std::size_t r = 1; r < e.size(); ++r) diffs.push_back(std::abs(e[r] - e[r - 1]));
    for (std::size_t r = 1; r < diffs.size(); ++r) {
      if (diffs[r] <= floor) continue;
      const double ratio = diffs[r - 1] / diffs[r];
      out.min_contraction = std::min(out.min_contraction, ratio);
      if (ratio < 2.0) {
        std::ostringstream os;
        os << "entry (" << i << "," << j << "," << k << "): extrapolant differences ";
        for (double x : diffs) os << x << " ";
        os << "do not shrink by a factor 2";
        throw Error(ErrorCode::NoApparentLimit, os.str());
      }
    }
    out.error_estimate = std::max(out.error_estimate, diffs.back());
    // below the resolution of the samples the limit is reported as exactly 0
    return std::abs(e.back()) <= floor ? Complex(0) : e.back();
  };

  for (std::size_t i = 1; i < d; ++i)
    for (std::size_t j = 1; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) out.m(i, j, k) = estimate(i, j, k);
  return out;
}

ComplexMatrix lambda_of(const Tensor3& m) {
  const std::size_t n = m.dim() - 1;
  ComplexMatrix l(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) l(i, j) = m(i + 1, j + 1, 0);
  return l;
}

LimitSymmetryReport check_limit_symmetries(const Tensor3& m, double tol) {
  if (m.dim() < 2) throw Error(ErrorCode::DimensionMismatch, "tensor must live on C^{N+1}, N >= 1");
  LimitSymmetryReport r;
  r.tol = tol;
  const Tensor3 red = m.restricted();
  const auto sym = check_symmetries(red, tol, false);
  r.sym1 = sym.sym1;
  r.sym2 = sym.sym2;
  r.sym3 = sym.sym3;
  const ComplexMatrix l = lambda_of(m);
  r.lambda_symmetry = symmetry_defect(l);
  r.lambda_unitarity = unitarity_defect(l);

  const std::size_t n = red.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        Complex a = 0, b = 0, c = 0;
        for (std::size_t q = 0; q < n; ++q) {
          a += red(i, j, q) * l(q, k);
          b += red(k, j, q) * l(q, i);
          c += std::conj(red(k, q, j)) * l(i, q);
        }
        r.ml = std::max(r.ml, std::abs(a - b));
        r.sbl = std::max(r.sbl, std::abs(c - red(i, j, k)));
      }
  return r;
}

LimitSpec classify(const Tensor3& m, double tol, std::uint64_t seed) {
  const auto report = check_limit_symmetries(m, tol);
  if (!report.ok()) {
    std::ostringstream os;
    os << "limit relations fail: sym " << report.sym1 << "/" << report.sym2 << "/"
       << report.sym3 << ", Lambda symmetry " << report.lambda_symmetry << ", unitarity "
       << report.lambda_unitarity << ", ML " << report.ml << ", SbL " << report.sbl;
    throw Error(ErrorCode::NotDoublySymmetric, os.str());
  }
  LimitSpec spec;
  spec.m = m.restricted();
  spec.dim = spec.m.dim();
  spec.lambda = lambda_of(m);
  const std::size_t n = spec.dim;

  const DiagResult diag = diagonalize(spec.m, tol, seed);
  for (std::size_t a = 0; a < diag.vectors.size(); ++a) {
    spec.poisson.push_back({diag.vectors[a], diag.weights[a]});
  }

  const TakagiResult t = takagi(spec.lambda, tol);
  spec.v = t.u * t.d.cwiseSqrt().cast<Complex>().asDiagonal();
  // V is fixed up to V O with O real orthogonal; pick O so that Re(V) is
  // symmetric positive semi-definite (polar factor).
  Eigen::JacobiSVD<RealMatrix> svd(spec.v.real(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  spec.v = spec.v * (svd.matrixV() * svd.matrixU().transpose()).cast<Complex>();

  // Real pre-images of the jump directions. Two admissible V differ by a real
  // orthogonal factor, so realness does not depend on the Takagi branch.
  std::vector<RealVector> basis;
  for (std::size_t a = 0; a < spec.poisson.size(); ++a) {
    const ComplexVector w = spec.v.adjoint() * spec.poisson[a].v;
    const double imag = max_abs(w.imag());
    if (imag > tol * std::max(1.0, w.norm())) {
      std::ostringstream os;
      os << "jump direction " << a + 1 << " has no real pre-image (imaginary part " << imag
         << ")";
      throw Error(ErrorCode::InconsistentCount, os.str());
    }
    basis.push_back(w.real().normalized());
  }
  const std::size_t n_poisson = basis.size();
  for (std::size_t e = 0; e < n && basis.size() < n; ++e) {
    RealVector c = RealVector::Unit(n, e);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) c -= b.dot(c) * b;
    if (c.norm() > 1e-6) basis.push_back(c.normalized());
  }
  if (basis.size() != n) {
    throw Error(ErrorCode::InconsistentCount, "jump directions and Brownian complement do not "
                                              "span the space");
  }
  for (std::size_t b = n_poisson; b < n; ++b) {
    spec.brownian.push_back(spec.v * basis[b].cast<Complex>());
  }
  return spec;
}

Tensor3 full_limit_tensor(const LimitSpec& spec) {
  const std::size_t n = spec.dim;
  Tensor3 m(n + 1, false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m(i + 1, j + 1, 0) = spec.lambda(i, j);
      for (std::size_t k = 0; k < n; ++k) m(i + 1, j + 1, k + 1) = spec.m(i, j, k);
    }
  return m;
}

}  // namespace obtuse
