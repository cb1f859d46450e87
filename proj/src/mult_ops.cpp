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

#include "obtuse/mult_ops.hpp"

#include <cmath>
#include <sstream>

namespace obtuse {

namespace {

void require_index(std::size_t i, std::size_t dim) {
  if (i >= dim) {
    throw Error(ErrorCode::IndexOutOfRange,
                "coordinate " + std::to_string(i) + " of a variable with " +
                    std::to_string(dim) + " basis functions");
  }
}

std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t out = 1;
  for (std::size_t e = 0; e < exp; ++e) {
    if (out > cap / base) return cap + 1;
    out *= base;
  }
  return out;
}

}  // namespace

ComplexMatrix basis_matrix(std::size_t dim, std::size_t j, std::size_t k) {
  require_index(j, dim);
  require_index(k, dim);
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  a(k, j) = 1.0;
  return a;
}

ComplexMatrix mult_op(const Tensor3& s, std::size_t i) {
  const std::size_t d = s.dim();
  require_index(i, d);
  ComplexMatrix m(d, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j) m(k, j) = s(i, j, k);
  return m;
}

ComplexMatrix conj_mult_op(const Tensor3& s, std::size_t i) {
  const std::size_t d = s.dim();
  require_index(i, d);
  ComplexMatrix m(d, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j) m(k, j) = std::conj(s(i, k, j));
  return m;
}

ComplexMatrix direct_mult_op(const ObtuseRV& rv, std::size_t i) {
  const std::size_t d = rv.dim() + 1;
  require_index(i, d);
  ComplexMatrix w(d, rv.size());
  ComplexVector xi(rv.size());
  for (std::size_t m = 0; m < rv.size(); ++m) {
    const ComplexVector x = rv.hatted(m);
    w.col(m) = std::sqrt(rv.probability(m)) * x.conjugate();
    xi(m) = x(i);
  }
  return w * xi.asDiagonal() * w.adjoint();
}

Complex expectation_functional(const Tensor3& s, const Polynomial& f) {
  const std::size_t d = s.dim();
  std::vector<ComplexMatrix> ops(d), conj_ops(d);
  for (std::size_t i = 0; i < d; ++i) {
    ops[i] = mult_op(s, i);
    conj_ops[i] = conj_mult_op(s, i);
  }
  Complex total = 0;
  for (const auto& mono : f) {
    ComplexVector state = ComplexVector::Zero(d);
    state(0) = 1.0;
    for (auto it = mono.factors.rbegin(); it != mono.factors.rend(); ++it) {
      require_index(it->index, d);
      state = (it->conjugate ? conj_ops[it->index] : ops[it->index]) * state;
    }
    total += mono.coeff * state(0);
  }
  return total;
}

Complex expectation_direct(const ObtuseRV& rv, const Polynomial& f) {
  const std::size_t d = rv.dim() + 1;
  Complex total = 0;
  for (std::size_t m = 0; m < rv.size(); ++m) {
    const ComplexVector x = rv.hatted(m);
    Complex value = 0;
    for (const auto& mono : f) {
      Complex term = mono.coeff;
      for (const auto& fac : mono.factors) {
        require_index(fac.index, d);
        term *= fac.conjugate ? std::conj(x(fac.index)) : x(fac.index);
      }
      value += term;
    }
    total += rv.probability(m) * value;
  }
  return total;
}

SparseComplexMatrix ampliate(const ComplexMatrix& op, std::size_t site, std::size_t n_sites) {
  if (op.rows() != op.cols()) throw Error(ErrorCode::DimensionMismatch, "site operator");
  if (site >= n_sites) throw Error(ErrorCode::IndexOutOfRange, "site " + std::to_string(site));
  const std::size_t d = op.rows();
  const std::size_t left = checked_power(d, site, kMaxChainDim);
  const std::size_t right = checked_power(d, n_sites - site - 1, kMaxChainDim);
  if (left * d * right > kMaxChainDim) {
    throw Error(ErrorCode::ChainTooLarge, "chain dimension exceeds " +
                                              std::to_string(kMaxChainDim));
  }
  const std::size_t total = left * d * right;
  std::vector<Eigen::Triplet<Complex>> trips;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const Complex z = op(a, b);
      if (z == Complex(0)) continue;
      for (std::size_t l = 0; l < left; ++l)
        for (std::size_t r = 0; r < right; ++r) {
          trips.emplace_back((l * d + a) * right + r, (l * d + b) * right + r, z);
        }
    }
  SparseComplexMatrix out(total, total);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SparseComplexMatrix chain_mult_op(const Tensor3& s, std::size_t i, std::size_t n_sites,
                                  double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::NonPositiveStep, "h must be positive");
  if (n_sites == 0) throw Error(ErrorCode::InvalidArgument, "chain needs at least one site");
  const std::size_t d = s.dim();
  const std::size_t total = checked_power(d, n_sites, kMaxChainDim);
  if (total > kMaxChainDim) {
    std::ostringstream os;
    os << d << "^" << n_sites << " exceeds " << kMaxChainDim;
    throw Error(ErrorCode::ChainTooLarge, os.str());
  }
  const ComplexMatrix site_op = (i == 0 ? h : std::sqrt(h)) * mult_op(s, i);
  SparseComplexMatrix out(total, total);
  for (std::size_t m = 0; m < n_sites; ++m) out += ampliate(site_op, m, n_sites);
  return out;
}

}  // namespace obtuse
