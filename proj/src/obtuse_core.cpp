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

#include "obtuse/obtuse_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace obtuse {

namespace {

constexpr double kTieWindow = 1e-12;
constexpr std::size_t kMaxMatchings = 1'000'000;

std::string pair_label(std::size_t i, std::size_t j) {
  std::ostringstream os;
  os << "(" << i + 1 << "," << j + 1 << ")";
  return os.str();
}

void require_same_dims(const std::vector<ComplexVector>& values, std::size_t dim) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (static_cast<std::size_t>(values[i].size()) != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "value " + std::to_string(i + 1) + " has dimension " +
                      std::to_string(values[i].size()) + ", expected " + std::to_string(dim));
    }
  }
}

ComplexVector hat(const ComplexVector& v) {
  ComplexVector out(v.size() + 1);
  out(0) = 1.0;
  out.tail(v.size()) = v;
  return out;
}

}  // namespace

double ObtuseValidation::max_pair_residual() const {
  double m = 0;
  for (const auto& pr : pair_residuals) m = std::max(m, pr.second);
  return m;
}

ObtuseValidation validate_obtuse_system(const std::vector<ComplexVector>& values, double tol) {
  if (values.size() < 2) {
    throw Error(ErrorCode::DimensionMismatch, "an obtuse system needs at least two values");
  }
  const std::size_t n = values.size() - 1;
  require_same_dims(values, n);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].squaredNorm() == 0.0) {
      throw Error(ErrorCode::DimensionMismatch, "value " + std::to_string(i + 1) + " is zero");
    }
    if (!values[i].allFinite()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "value " + std::to_string(i + 1) + " is not finite");
    }
  }

  ObtuseValidation out;
  out.dim = n;
  out.tol = tol;
  for (const auto& v : values) out.probabilities.push_back(1.0 / (1.0 + v.squaredNorm()));

  double worst = -1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      const double r = std::abs(values[i].dot(values[j]) + 1.0);  // dot() conjugates the left
      out.pair_residuals.push_back({{i, j}, r});
      if (r > worst) {
        worst = r;
        out.offending_pair = std::make_pair(i, j);
      }
    }
  }

  double psum = 0;
  ComplexVector mean = ComplexVector::Zero(n);
  ComplexMatrix resolution = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double p = out.probabilities[i];
    psum += p;
    mean += p * values[i];
    resolution += p * values[i] * values[i].adjoint();
  }
  out.probability_sum_residual = std::abs(psum - 1.0);
  out.centering_residual = mean.norm();
  out.identity_residual = max_abs(resolution - ComplexMatrix::Identity(n, n));
  out.valid = worst <= tol;
  if (out.valid) out.offending_pair.reset();
  return out;
}

ObtuseSystem ObtuseSystem::from_values(std::vector<ComplexVector> values, double tol) {
  auto report = validate_obtuse_system(values, tol);
  if (!report.valid) {
    const auto [i, j] = *report.offending_pair;
    std::ostringstream os;
    os << "pair " << pair_label(i, j) << " has |<v_i, v_j> + 1| = " << report.max_pair_residual()
       << " > " << tol;
    throw Error(ErrorCode::NotObtuse, os.str());
  }
  return ObtuseSystem(report.dim, std::move(values), std::move(report.probabilities));
}

ObtuseSystem ObtuseSystem::from_values(std::vector<ComplexVector> values,
                                       const std::vector<double>& probabilities, double tol) {
  if (probabilities.size() != values.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(probabilities.size()) + " probabilities for " +
                    std::to_string(values.size()) + " values");
  }
  ObtuseSystem sys = from_values(std::move(values), tol);
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (std::abs(probabilities[i] - sys.probabilities_[i]) > tol) {
      std::ostringstream os;
      os << "atom " << i + 1 << ": given " << probabilities[i] << ", 1/(1+|v|^2) = "
         << sys.probabilities_[i];
      throw Error(ErrorCode::ProbabilityMismatch, os.str());
    }
  }
  return sys;
}

ComplexVector ObtuseSystem::hatted(std::size_t i) const { return hat(values_.at(i)); }

ComplexMatrix ObtuseSystem::amplitude_matrix() const {
  ComplexMatrix a(size(), dim_ + 1);
  for (std::size_t i = 0; i < size(); ++i) {
    a.row(i) = std::sqrt(probabilities_[i]) * hatted(i).transpose();
  }
  return a;
}

bool ObtuseSystem::is_real(double tol) const {
  return std::all_of(values_.begin(), values_.end(),
                     [tol](const ComplexVector& v) { return max_abs(v.imag()) <= tol; });
}

CenteringReport rv_is_centered_normalized(const DiscreteRV& rv, double tol) {
  if (rv.values.empty() || rv.probabilities.size() != rv.values.size()) {
    throw Error(ErrorCode::DimensionMismatch, "values and probabilities differ in length");
  }
  const std::size_t d = rv.dim();
  require_same_dims(rv.values, d);
  ComplexVector mean = ComplexVector::Zero(d);
  ComplexMatrix cov = ComplexMatrix::Zero(d, d);
  for (std::size_t m = 0; m < rv.size(); ++m) {
    mean += rv.probabilities[m] * rv.values[m];
    // (i, j) entry is E[conj(X^i) X^j]
    cov += rv.probabilities[m] * rv.values[m].conjugate() * rv.values[m].transpose();
  }
  CenteringReport out;
  out.mean_residual = mean.norm();
  out.covariance_residual = max_abs(cov - ComplexMatrix::Identity(d, d));
  out.centered_normalized = out.mean_residual <= tol && out.covariance_residual <= tol;
  return out;
}

Tensor3 tensor_of(const ObtuseRV& rv) {
  const std::size_t dd = rv.dim() + 1;
  Tensor3 s(dd, true);
  for (std::size_t m = 0; m < rv.size(); ++m) {
    const ComplexVector x = rv.hatted(m);
    const double p = rv.probability(m);
    for (std::size_t i = 0; i < dd; ++i)
      for (std::size_t j = 0; j < dd; ++j) {
        const Complex pij = p * x(i) * x(j);
        for (std::size_t k = 0; k < dd; ++k) s(i, j, k) += pij * std::conj(x(k));
      }
  }
  return s;
}

double product_identity_residual(const ObtuseRV& rv, const Tensor3& s) {
  const std::size_t dd = rv.dim() + 1;
  if (s.dim() != dd) throw Error(ErrorCode::DimensionMismatch, "tensor and variable");
  double worst = 0;
  for (std::size_t m = 0; m < rv.size(); ++m) {
    const ComplexVector x = rv.hatted(m);
    for (std::size_t i = 0; i < dd; ++i)
      for (std::size_t j = 0; j < dd; ++j) {
        Complex rhs = 0;
        for (std::size_t k = 0; k < dd; ++k) rhs += s(i, j, k) * x(k);
        worst = std::max(worst, std::abs(x(i) * x(j) - rhs));
      }
  }
  return worst;
}

double conjugate_identity_residual(const ObtuseRV& rv, const Tensor3& s) {
  const std::size_t dd = rv.dim() + 1;
  if (s.dim() != dd) throw Error(ErrorCode::DimensionMismatch, "tensor and variable");
  double worst = 0;
  for (std::size_t m = 0; m < rv.size(); ++m) {
    const ComplexVector x = rv.hatted(m);
    for (std::size_t i = 0; i < dd; ++i)
      for (std::size_t j = 0; j < dd; ++j) {
        Complex rhs = 0;
        for (std::size_t k = 0; k < dd; ++k) rhs += std::conj(s(i, k, j)) * x(k);
        worst = std::max(worst, std::abs(std::conj(x(i)) * x(j) - rhs));
      }
  }
  return worst;
}

SymmetryReport check_symmetries(const Tensor3& s, double tol, std::optional<bool> check_sym0) {
  SymmetryReport r;
  r.tol = tol;
  const std::size_t d = s.dim();
  r.sym0_checked = check_sym0.value_or(s.constant_coordinate());

  if (r.sym0_checked && d > 0) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k)
        r.sym0 = std::max(r.sym0, std::abs(s(i, 0, k) - (i == k ? 1.0 : 0.0)));
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        r.sym1 = std::max(r.sym1, std::abs(s(i, j, k) - s(j, i, k)));

  // a2(i,j,k,l) = sum_m S^{im}_j S^{kl}_m, a3(i,j,k,l) = sum_m S^{im}_j conj(S^{lm}_k)
  std::vector<Complex> a2(d * d * d * d), a3(d * d * d * d);
  auto at = [d](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return ((i * d + j) * d + k) * d + l;
  };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
          Complex x2 = 0, x3 = 0;
          for (std::size_t m = 0; m < d; ++m) {
            x2 += s(i, m, j) * s(k, l, m);
            x3 += s(i, m, j) * std::conj(s(l, m, k));
          }
          a2[at(i, j, k, l)] = x2;
          a3[at(i, j, k, l)] = x3;
        }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
          r.sym2 = std::max(r.sym2, std::abs(a2[at(i, j, k, l)] - a2[at(k, j, i, l)]));
          r.sym3 = std::max(r.sym3, std::abs(a3[at(i, j, k, l)] - a3[at(k, j, i, l)]));
        }
  return r;
}

UnitaryRelation relate_same_probabilities(const ObtuseRV& x, const ObtuseRV& y, double tol) {
  if (x.dim() != y.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "variables live in different dimensions");
  }
  const std::size_t n = x.size();
  auto sorted_order = [n](const ObtuseRV& rv) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&rv](std::size_t a, std::size_t b) {
      return rv.probability(a) < rv.probability(b);
    });
    return idx;
  };
  const auto ox = sorted_order(x);
  const auto oy = sorted_order(y);
  for (std::size_t r = 0; r < n; ++r) {
    if (std::abs(x.probability(ox[r]) - y.probability(oy[r])) > std::max(tol, kTieWindow)) {
      std::ostringstream os;
      os << "sorted probability " << r + 1 << ": " << x.probability(ox[r]) << " vs "
         << y.probability(oy[r]);
      throw Error(ErrorCode::ProbabilityMismatch, os.str());
    }
  }

  // Tied blocks (in sorted position) of Y; each block is permuted independently.
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && y.probability(oy[end]) - y.probability(oy[end - 1]) <= kTieWindow) ++end;
    blocks.push_back({start, end});
    start = end;
  }

  const ComplexMatrix bx = x.amplitude_matrix().transpose();  // columns sqrt(p) xhat
  const ComplexMatrix by = y.amplitude_matrix().transpose();
  std::vector<std::size_t> target = oy;  // sorted position r of X goes to atom target[r] of Y
  for (auto& [b, e] : blocks) std::sort(target.begin() + b, target.begin() + e);

  auto attempt = [&]() -> std::optional<UnitaryRelation> {
    ComplexMatrix byp(by.rows(), n);
    for (std::size_t r = 0; r < n; ++r) byp.col(ox[r]) = by.col(target[r]);
    const ComplexMatrix v = byp * bx.adjoint();
    UnitaryRelation rel;
    rel.u = v.bottomRightCorner(x.dim(), x.dim());
    rel.permutation.assign(n, 0);
    for (std::size_t r = 0; r < n; ++r) rel.permutation[ox[r]] = target[r];
    for (std::size_t i = 0; i < n; ++i) {
      rel.residual = std::max(
          rel.residual, (rel.u * x.value(i) - y.value(rel.permutation[i])).cwiseAbs().maxCoeff());
    }
    if (rel.residual <= tol && unitarity_defect(rel.u) <= tol) return rel;
    return std::nullopt;
  };

  std::size_t tried = 0;
  // Odometer over the permutations of every block.
  for (;;) {
    if (auto rel = attempt()) return *rel;
    if (++tried >= kMaxMatchings) break;
    bool advanced = false;
    for (auto& [b, e] : blocks) {
      if (e - b < 2) continue;
      if (std::next_permutation(target.begin() + b, target.begin() + e)) {
        advanced = true;
        break;
      }
      // wrapped back to sorted order; carry into the next block
    }
    if (!advanced) break;
  }
  throw Error(ErrorCode::AmbiguousMatching,
              "no matching of equal-probability atoms relates the two variables after " +
                  std::to_string(tried) + " attempts");
}

Embedding embed_general(const DiscreteRV& x, const ObtuseRV& y, double tol) {
  const std::size_t n = x.size();
  const std::size_t d = x.dim();
  if (x.probabilities.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "values and probabilities differ in length");
  }
  require_same_dims(x.values, d);
  if (n < d + 1) {
    throw Error(ErrorCode::MinimalSupport, std::to_string(n) + " atoms cannot carry a "
                                               "normalized variable in dimension " +
                                               std::to_string(d));
  }
  if (y.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "obtuse variable must have " +
                                                  std::to_string(n) + " atoms");
  }
  const auto centering = rv_is_centered_normalized(x, tol);
  if (!centering.centered_normalized) {
    std::ostringstream os;
    os << "|E X| = " << centering.mean_residual
       << ", covariance defect = " << centering.covariance_residual;
    throw Error(ErrorCode::NotNormalized, os.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(x.probabilities[i] - y.probability(i)) > tol) {
      throw Error(ErrorCode::ProbabilityMismatch, "atom " + std::to_string(i + 1));
    }
  }

  const std::size_t m = n - 1;
  ComplexMatrix w(m, m), xm(d, m);
  for (std::size_t i = 0; i < m; ++i) {
    w.col(i) = y.value(i);
    xm.col(i) = x.values[i];
  }
  // A W = X  <=>  W^t A^t = X^t
  Eigen::FullPivLU<ComplexMatrix> lu(w.transpose());
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::SingularSystem, "values of the obtuse variable are not free");
  }
  Embedding out;
  out.a = lu.solve(xm.transpose()).transpose();
  out.last_atom_residual = (out.a * y.value(m) - x.values[m]).cwiseAbs().maxCoeff();
  out.coisometry_residual =
      max_abs(out.a * out.a.adjoint() - ComplexMatrix::Identity(d, d));
  if (out.last_atom_residual > tol || out.coisometry_residual > tol) {
    std::ostringstream os;
    os << "inconsistent embedding: last atom " << out.last_atom_residual << ", AA* - I "
       << out.coisometry_residual;
    throw Error(ErrorCode::SingularSystem, os.str());
  }
  return out;
}

ObtuseSystem real_obtuse_system(const std::vector<double>& probabilities) {
  const std::size_t n = probabilities.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two probabilities");
  double sum = 0;
  for (double p : probabilities) {
    if (!(p > 0.0) || p >= 1.0) {
      throw Error(ErrorCode::InvalidArgument, "probabilities must lie in (0, 1)");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12 * n) {
    throw Error(ErrorCode::InvalidArgument, "probabilities must sum to 1");
  }
  RealVector u(n);
  for (std::size_t i = 0; i < n; ++i) u(i) = std::sqrt(probabilities[i]);
  RealVector w = -u;
  w(0) += 1.0;
  const RealMatrix o = RealMatrix::Identity(n, n) - 2.0 * w * w.transpose() / w.squaredNorm();

  std::vector<ComplexVector> values;
  for (std::size_t i = 0; i < n; ++i) {
    values.push_back((o.row(i).tail(n - 1).transpose() / u(i)).cast<Complex>());
  }
  // Atoms of tiny probability have large values; scale the check accordingly.
  double scale = 1.0;
  for (const auto& v : values) scale = std::max(scale, v.squaredNorm());
  return ObtuseSystem::from_values(std::move(values), 1e-10 * scale);
}

ObtuseSystem rotate(const ObtuseSystem& system, const ComplexMatrix& u, double tol) {
  if (static_cast<std::size_t>(u.rows()) != system.dim() ||
      static_cast<std::size_t>(u.cols()) != system.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "unitary does not act on C^" +
                                                  std::to_string(system.dim()));
  }
  if (unitarity_defect(u) > tol) throw Error(ErrorCode::NotUnitary, "rotation");
  std::vector<ComplexVector> values;
  for (const auto& v : system.values()) values.push_back(u * v);
  double scale = 1.0;
  for (const auto& v : values) scale = std::max(scale, v.squaredNorm());
  return ObtuseSystem::from_values(std::move(values), std::max(tol, 1e-10 * scale));
}

double min_subfamily_singular_value(const ObtuseSystem& system) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = system.dim();
  for (std::size_t drop = 0; drop < system.size(); ++drop) {
    ComplexMatrix m(n, n);
    std::size_t c = 0;
    for (std::size_t i = 0; i < system.size(); ++i) {
      if (i != drop) m.col(c++) = system.value(i);
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    best = std::min(best, svd.singularValues().minCoeff());
  }
  return best;
}

}  // namespace obtuse
