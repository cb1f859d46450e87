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

#include "obtuse/tensor_diag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "obtuse/takagi.hpp"

namespace obtuse {

namespace {

constexpr int kMaxDraws = 5;

ComplexVector random_unit(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexVector w(n);
  for (std::size_t i = 0; i < n; ++i) w(i) = Complex(gauss(rng), gauss(rng));
  return w.normalized();
}

double family_scale(const std::vector<ComplexVector>& family) {
  double s = 1.0;
  for (const auto& v : family) s = std::max(s, v.squaredNorm());
  return s;
}

}  // namespace

Tensor3 tensor_from_family(const std::vector<ComplexVector>& family, bool constant_coordinate,
                           double tol) {
  if (family.empty()) {
    throw Error(ErrorCode::InvalidArgument, "an empty family does not fix the dimension");
  }
  const std::size_t d = family.front().size();
  for (std::size_t a = 0; a < family.size(); ++a) {
    if (static_cast<std::size_t>(family[a].size()) != d) {
      throw Error(ErrorCode::DimensionMismatch, "family vectors differ in dimension");
    }
    if (family[a].squaredNorm() == 0.0) {
      throw Error(ErrorCode::NotOrthogonal, "family contains a zero vector");
    }
    for (std::size_t b = 0; b < a; ++b) {
      const double ip = std::abs(family[b].dot(family[a]));
      if (ip > tol * std::max(1.0, family[a].norm() * family[b].norm())) {
        std::ostringstream os;
        os << "|<v" << b + 1 << ", v" << a + 1 << ">| = " << ip;
        throw Error(ErrorCode::NotOrthogonal, os.str());
      }
    }
  }
  Tensor3 s(d, constant_coordinate);
  for (const auto& v : family) {
    const double w = 1.0 / v.squaredNorm();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const Complex vij = w * v(i) * v(j);
        for (std::size_t k = 0; k < d; ++k) s(i, j, k) += vij * std::conj(v(k));
      }
  }
  return s;
}

DiagResult diagonalize(const Tensor3& s, double tol, std::uint64_t seed) {
  const double smax = s.max_abs();
  const double scale = std::max(1.0, smax);
  const auto sym = check_symmetries(s, tol, false);
  if (sym.sym1 > tol * scale || sym.sym2 > tol * scale * scale ||
      sym.sym3 > tol * scale * scale) {
    std::ostringstream os;
    os << "residuals sym1 " << sym.sym1 << ", sym2 " << sym.sym2 << ", sym3 " << sym.sym3;
    throw Error(ErrorCode::NotDoublySymmetric, os.str());
  }
  DiagResult out;
  if (smax == 0.0) return out;

  const std::size_t d = s.dim();
  std::mt19937_64 rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    const ComplexVector w = random_unit(d, rng);
    TakagiResult t;
    try {
      t = takagi(s.eval(w), tol);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoConvergence) continue;
      throw;
    }

    std::vector<ComplexVector> family;
    for (std::size_t m = 0; m < d; ++m) {
      const ComplexVector a = t.u.col(m);
      const ComplexMatrix sa = s.eval(a);
      if (max_abs(sa) <= tol * smax) continue;
      const Complex rho = a.adjoint() * sa * a.conjugate();
      family.push_back(rho * a);
    }

    double residual = 0;
    bool ok = true;
    for (std::size_t a = 0; a < family.size() && ok; ++a) {
      const auto& v = family[a];
      const double fix = max_abs(s.eval(v) - v * v.transpose());
      if (fix > tol * scale * std::max(1.0, v.squaredNorm())) ok = false;
      for (std::size_t b = 0; b < a && ok; ++b) {
        if (std::abs(family[b].dot(v)) > tol * std::max(1.0, v.norm() * family[b].norm())) {
          ok = false;
        }
      }
    }
    if (ok && !family.empty()) {
      residual = (tensor_from_family(family, s.constant_coordinate(), 1.0) - s).max_abs();
      ok = residual <= tol * scale * std::max(1.0, std::sqrt(family_scale(family)));
    } else if (ok) {
      ok = false;
      residual = smax;
    }
    if (!ok) {
      best = std::min(best, residual);
      continue;
    }

    std::stable_sort(family.begin(), family.end(),
                     [](const ComplexVector& x, const ComplexVector& y) {
                       return x.squaredNorm() > y.squaredNorm();
                     });
    out.vectors = std::move(family);
    for (const auto& v : out.vectors) out.weights.push_back(1.0 / v.squaredNorm());
    out.residual = residual;
    return out;
  }
  std::ostringstream os;
  os << "no probe separated the fixed points after " << kMaxDraws << " draws";
  if (std::isfinite(best)) os << " (best reconstruction residual " << best << ")";
  throw Error(ErrorCode::NoConvergence, os.str());
}

ObtuseSystem obtuse_fixed_points(const Tensor3& s, double tol, std::uint64_t seed) {
  if (s.dim() < 2) throw Error(ErrorCode::DimensionMismatch, "tensor must live on C^{N+1}, N >= 1");
  const auto diag = diagonalize(s, tol, seed);
  const std::size_t expected = s.dim();
  if (diag.vectors.size() != expected) {
    throw Error(ErrorCode::WrongCount, std::to_string(diag.vectors.size()) +
                                           " fixed points, expected " +
                                           std::to_string(expected));
  }
  std::vector<ComplexVector> values;
  std::vector<double> probabilities;
  const double scale = std::max(1.0, s.max_abs());
  for (std::size_t m = 0; m < diag.vectors.size(); ++m) {
    const auto& v = diag.vectors[m];
    if (std::abs(v(0) - 1.0) > tol * scale) {
      std::ostringstream os;
      os << "fixed point " << m + 1 << " has first coordinate " << v(0);
      throw Error(ErrorCode::WrongCount, os.str());
    }
    values.push_back(v.tail(expected - 1));
    probabilities.push_back(diag.weights[m]);
  }
  const double vscale = family_scale(diag.vectors);
  return ObtuseSystem::from_values(std::move(values), probabilities, tol * vscale);
}

ComplexMatrix extend_unitary(const ComplexMatrix& u) {
  ComplexMatrix out = ComplexMatrix::Zero(u.rows() + 1, u.cols() + 1);
  out(0, 0) = 1.0;
  out.bottomRightCorner(u.rows(), u.cols()) = u;
  return out;
}

Tensor3 transform(const ComplexMatrix& u_in, const Tensor3& t, double tol) {
  const std::size_t d = t.dim();
  ComplexMatrix u;
  if (u_in.rows() != u_in.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "transform needs a square matrix");
  }
  if (static_cast<std::size_t>(u_in.rows()) == d) {
    u = u_in;
  } else if (t.constant_coordinate() && static_cast<std::size_t>(u_in.rows()) + 1 == d) {
    u = extend_unitary(u_in);
  } else {
    throw Error(ErrorCode::DimensionMismatch,
                "unitary of size " + std::to_string(u_in.rows()) + " on a tensor of C^" +
                    std::to_string(d));
  }
  const double defect = unitarity_defect(u);
  if (defect > tol) {
    std::ostringstream os;
    os << "|U*U - I| = " << defect;
    throw Error(ErrorCode::NotUnitary, os.str());
  }

  // Contract one index at a time: p, then n, then m.
  std::vector<Complex> t1(d * d * d), t2(d * d * d);
  auto at = [d](std::size_t a, std::size_t b, std::size_t c) { return (a * d + b) * d + c; };
  for (std::size_t m = 0; m < d; ++m)
    for (std::size_t n = 0; n < d; ++n)
      for (std::size_t k = 0; k < d; ++k) {
        Complex acc = 0;
        for (std::size_t p = 0; p < d; ++p) acc += std::conj(u(k, p)) * t(m, n, p);
        t1[at(m, n, k)] = acc;
      }
  for (std::size_t m = 0; m < d; ++m)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) {
        Complex acc = 0;
        for (std::size_t n = 0; n < d; ++n) acc += u(j, n) * t1[at(m, n, k)];
        t2[at(m, j, k)] = acc;
      }
  Tensor3 s(d, t.constant_coordinate());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) {
        Complex acc = 0;
        for (std::size_t m = 0; m < d; ++m) acc += u(i, m) * t2[at(m, j, k)];
        s(i, j, k) = acc;
      }
  return s;
}

double real_criterion_residual(const Tensor3& s) {
  double worst = 0;
  const std::size_t d = s.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        worst = std::max(worst, std::abs(s(i, j, k) - s(k, j, i)));
  return worst;
}

bool is_real_tensor(const Tensor3& s, double tol) { return real_criterion_residual(s) <= tol; }

RealificationResult realify(const Tensor3& s, double tol, std::uint64_t seed) {
  if (s.dim() < 2) throw Error(ErrorCode::DimensionMismatch, "tensor must live on C^{N+1}, N >= 1");
  const std::size_t n = s.dim() - 1;
  const double scale = std::max(1.0, s.max_abs());
  ComplexMatrix s0(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s0(i, j) = s(i + 1, j + 1, 0);
  const double asym = symmetry_defect(s0);
  const double unit = unitarity_defect(s0);
  if (asym > tol * scale || unit > tol * scale) {
    std::ostringstream os;
    os << "S_0 symmetry defect " << asym << ", unitarity defect " << unit;
    throw Error(ErrorCode::S0NotUnitary, os.str());
  }

  // S_0 unitary: its Takagi values are all 1 up to rounding, and the square
  // root of the diagonal factor is taken entrywise.
  const TakagiResult t = takagi(s0, tol);
  const ComplexMatrix v = t.u * t.d.cwiseSqrt().cast<Complex>().asDiagonal();
  // V is unitary only up to the defect of S_0; re-unitarize before acting.
  Eigen::JacobiSVD<ComplexMatrix> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const ComplexMatrix v_unitary = svd.matrixU() * svd.matrixV().adjoint();
  Tensor3 r = transform(v_unitary.adjoint(), s, tol * scale);
  const double real_res = real_criterion_residual(r);
  if (real_res > tol * scale) {
    std::ostringstream os;
    os << "V^* o S fails the real criterion by " << real_res;
    throw Error(ErrorCode::NoConvergence, os.str());
  }
  ObtuseSystem real_system = obtuse_fixed_points(r, tol, seed);
  const double s0_residual = max_abs(v * v.transpose() - s0);
  return RealificationResult{v, std::move(r), std::move(real_system), s0_residual};
}

Triangularization triangularize_system(const ObtuseSystem& system, double tol) {
  (void)tol;
  const std::size_t n = system.dim();
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) a.col(i) = system.value(i);
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  Triangularization out;
  out.u = q.adjoint();
  for (const auto& v : system.values()) {
    ComplexVector w = out.u * v;
    out.triangular.push_back(w);
  }
  for (std::size_t i = 0; i < n; ++i) out.triangular[i].tail(n - 1 - i).setZero();
  return out;
}

PhaseExtraction extract_phases(const std::vector<ComplexVector>& triangular, double tol) {
  // validates shape and the obtuse relations
  const ObtuseSystem sys = ObtuseSystem::from_values(triangular, tol * family_scale(triangular));
  const std::size_t n = sys.dim();
  PhaseExtraction out{.phases = ComplexVector(n), .real_system = sys, .max_imag = 0};
  for (std::size_t k = 0; k < n; ++k) {
    const Complex z = triangular[k](k);
    out.phases(k) = z / std::abs(z);
  }
  std::vector<ComplexVector> real_values;
  for (const auto& w : triangular) {
    const ComplexVector r = out.phases.conjugate().cwiseProduct(w);
    out.max_imag = std::max(out.max_imag, max_abs(r.imag()));
    real_values.push_back(r.real().cast<Complex>());
  }
  const double vscale = family_scale(triangular);
  if (out.max_imag > tol * std::sqrt(vscale)) {
    std::ostringstream os;
    os << "rows do not share a phase (imaginary residue " << out.max_imag << ")";
    throw Error(ErrorCode::NotObtuse, os.str());
  }
  out.real_system = ObtuseSystem::from_values(std::move(real_values), tol * vscale);
  return out;
}

ComplexMatrix realifying_unitary(const Triangularization& tri, const PhaseExtraction& ph) {
  return ph.phases.conjugate().asDiagonal() * tri.u;
}

}  // namespace obtuse
