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

#include "obtuse/takagi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace obtuse {

namespace {

constexpr int kMaxDraws = 5;

double scale_of(const ComplexMatrix& m) { return std::max(1.0, max_abs(m)); }

// Takagi vectors of a symmetric matrix, unsorted. Columns whose singular value
// is below sqrt(eps) * sigma_max are handed to a recursive call on the
// compressed complement, where they are resolved at their own scale.
void takagi_columns(const ComplexMatrix& m, ComplexMatrix& u, RealVector& d) {
  const Eigen::Index n = m.rows();
  u = ComplexMatrix::Identity(n, n);
  d = RealVector::Zero(n);
  if (n == 0 || max_abs(m) == 0.0) return;
  if (n == 1) {
    d(0) = std::abs(m(0, 0));
    u(0, 0) = std::polar(1.0, std::arg(m(0, 0)) / 2);
    return;
  }

  const RealMatrix a = m.real();
  const RealMatrix c = m.imag();
  RealMatrix k(2 * n, 2 * n);
  k << a, c, c, -a;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(k);
  const RealVector& ev = es.eigenvalues();  // ascending
  const double sigma_max = ev(2 * n - 1);
  const double cut = std::sqrt(std::numeric_limits<double>::epsilon()) * sigma_max;

  Eigen::Index good = 0;
  while (good < n && ev(2 * n - 1 - good) > cut) ++good;

  ComplexMatrix ug(n, good);
  for (Eigen::Index col = 0; col < good; ++col) {
    const auto r = es.eigenvectors().col(2 * n - 1 - col);
    ug.col(col) = r.head(n).cast<Complex>() + Complex(0, 1) * r.tail(n).cast<Complex>();
    d(col) = ev(2 * n - 1 - col);
  }
  // Columns of distinct positive singular values are orthogonal exactly;
  // Householder QR removes rounding and completes the basis.
  Eigen::HouseholderQR<ComplexMatrix> qr(ug);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  for (Eigen::Index col = 0; col < good; ++col) {
    // keep the eigenvector's phase: QR may flip it
    const Complex ph = q.col(col).dot(ug.col(col));
    q.col(col) *= ph / std::abs(ph);
  }
  u.leftCols(good) = q.leftCols(good);
  if (good == n) return;

  const ComplexMatrix p = q.rightCols(n - good);
  ComplexMatrix small = p.adjoint() * m * p.conjugate();
  small = 0.5 * (small + small.transpose()).eval();
  ComplexMatrix us;
  RealVector ds;
  takagi_columns(small, us, ds);
  u.rightCols(n - good) = p * us;
  d.tail(n - good) = ds;
}

}  // namespace

TakagiResult takagi(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "Takagi factorization needs a square matrix");
  }
  const double scale = scale_of(m);
  const double asym = symmetry_defect(m);
  if (asym > tol * scale) {
    std::ostringstream os;
    os << "|M - M^t| = " << asym;
    throw Error(ErrorCode::NotSymmetric, os.str());
  }
  const ComplexMatrix sym = 0.5 * (m + m.transpose());
  ComplexMatrix u;
  RealVector d;
  takagi_columns(sym, u, d);

  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&d](Eigen::Index x, Eigen::Index y) { return d(x) > d(y); });
  TakagiResult out;
  out.u.resize(n, n);
  out.d.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.u.col(i) = u.col(order[i]);
    out.d(i) = d(order[i]);
  }
  out.residual = max_abs(m - out.u * out.d.cast<Complex>().asDiagonal() * out.u.transpose());
  if (out.residual > tol * scale || unitarity_defect(out.u) > tol) {
    std::ostringstream os;
    os << "residual " << out.residual << ", unitarity defect " << unitarity_defect(out.u);
    throw Error(ErrorCode::NoConvergence, os.str());
  }
  return out;
}

double commuting_check(const std::vector<ComplexMatrix>& family) {
  if (family.empty()) return 0.0;
  const Eigen::Index n = family.front().rows();
  for (const auto& a : family) {
    if (a.rows() != n || a.cols() != n) {
      throw Error(ErrorCode::DimensionMismatch, "family members differ in shape");
    }
  }
  std::vector<ComplexMatrix> g;
  for (const auto& ai : family)
    for (const auto& aj : family) g.push_back(ai.conjugate() * aj);
  double worst = 0;
  for (std::size_t x = 0; x < g.size(); ++x)
    for (std::size_t y = x + 1; y < g.size(); ++y)
      worst = std::max(worst, max_abs(g[x] * g[y] - g[y] * g[x]));
  return worst;
}

namespace {

std::vector<double> joint_moduli(const std::vector<ComplexVector>& diagonals, Eigen::Index n) {
  std::vector<double> out(n, 0.0);
  for (const auto& dg : diagonals)
    for (Eigen::Index k = 0; k < n; ++k) out[k] += std::norm(dg(k));
  for (auto& x : out) x = std::sqrt(x);
  return out;
}

struct Draw {
  SimultaneousTakagiResult result;
  bool ok = false;
};

Draw draw_once(const std::vector<ComplexMatrix>& family, double tol, double scale,
               std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  const Eigen::Index n = family.front().rows();
  ComplexMatrix b = ComplexMatrix::Zero(n, n);
  for (const auto& a : family) b += Complex(gauss(rng), gauss(rng)) * a;

  Draw out;
  TakagiResult t;
  try {
    t = takagi(b, tol);
  } catch (const Error&) {
    return out;
  }
  out.result.u = t.u;
  for (const auto& a : family) {
    const ComplexMatrix dm = t.u.adjoint() * a * t.u.conjugate();
    out.result.diagonals.push_back(dm.diagonal());
    ComplexMatrix off = dm;
    off.diagonal().setZero();
    out.result.residual = std::max(out.result.residual, max_abs(off));
  }
  out.ok = out.result.residual <= tol * scale;
  return out;
}

// Rotates column k so that its first non-zero diagonal entry is real positive.
void normalize_phase(SimultaneousTakagiResult& r, Eigen::Index k, double tol) {
  for (const auto& dg : r.diagonals) {
    if (std::abs(dg(k)) > tol) {
      const Complex phi = std::sqrt(dg(k) / std::abs(dg(k)));
      r.u.col(k) *= phi;
      for (auto& d : r.diagonals) d(k) *= std::conj(phi * phi);
      return;
    }
  }
}

std::vector<double> phase_key(const std::vector<ComplexVector>& diagonals, Eigen::Index k,
                              double tol) {
  std::vector<double> key;
  for (const auto& dg : diagonals) {
    double a = 0;
    if (std::abs(dg(k)) > tol) {
      a = std::arg(dg(k));
      if (a < 0) a += 2 * M_PI;
    }
    key.push_back(a);
  }
  return key;
}

}  // namespace

SimultaneousTakagiResult simultaneous_takagi(const std::vector<ComplexMatrix>& family,
                                             double tol, std::uint64_t seed) {
  if (family.empty()) throw Error(ErrorCode::InvalidArgument, "empty family");
  double scale = 1.0;
  for (const auto& a : family) {
    if (a.rows() != a.cols() || a.rows() != family.front().rows()) {
      throw Error(ErrorCode::DimensionMismatch, "family members differ in shape");
    }
    scale = std::max(scale, max_abs(a));
    if (symmetry_defect(a) > tol * scale) {
      throw Error(ErrorCode::NotSymmetric, "family member is not symmetric");
    }
  }
  const double comm = commuting_check(family);
  if (comm > tol * scale * scale) {
    std::ostringstream os;
    os << "max commutator " << comm;
    throw Error(ErrorCode::NotCommuting, os.str());
  }

  const Eigen::Index n = family.front().rows();
  std::mt19937_64 rng(seed);
  std::optional<SimultaneousTakagiResult> found;
  double last_residual = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < kMaxDraws && !found; ++attempt) {
    Draw first = draw_once(family, tol, scale, rng);
    last_residual = std::min(last_residual, first.result.residual);
    if (!first.ok) continue;
    Draw second = draw_once(family, tol, scale, rng);
    if (!second.ok) continue;
    auto m1 = joint_moduli(first.result.diagonals, n);
    auto m2 = joint_moduli(second.result.diagonals, n);
    std::sort(m1.begin(), m1.end());
    std::sort(m2.begin(), m2.end());
    bool agree = true;
    for (Eigen::Index k = 0; k < n; ++k) agree = agree && std::abs(m1[k] - m2[k]) <= tol * scale;
    if (agree) found = std::move(first.result);
  }
  if (!found) {
    std::ostringstream os;
    os << "no joint diagonalizer after " << kMaxDraws << " draws (best off-diagonal "
       << last_residual << ")";
    throw Error(ErrorCode::NoConvergence, os.str());
  }

  for (Eigen::Index k = 0; k < n; ++k) normalize_phase(*found, k, tol * scale);
  const auto moduli = joint_moduli(found->diagonals, n);
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    if (std::abs(moduli[x] - moduli[y]) > tol * scale) return moduli[x] > moduli[y];
    return phase_key(found->diagonals, x, tol * scale) <
           phase_key(found->diagonals, y, tol * scale);
  });
  SimultaneousTakagiResult out;
  out.residual = found->residual;
  out.u.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) out.u.col(i) = found->u.col(order[i]);
  for (const auto& dg : found->diagonals) {
    ComplexVector sorted(n);
    for (Eigen::Index i = 0; i < n; ++i) sorted(i) = dg(order[i]);
    out.diagonals.push_back(sorted);
  }
  return out;
}

}  // namespace obtuse
