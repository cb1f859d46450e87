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

#include "obtuse/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace obtuse {

namespace {

std::discrete_distribution<std::size_t> atom_law(const ObtuseRV& rv) {
  return {rv.probabilities().begin(), rv.probabilities().end()};
}

void check_grid(const std::vector<double>& grid) {
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (!(grid[g] >= 0.0) || (g > 0 && grid[g] < grid[g - 1])) {
      throw Error(ErrorCode::InvalidArgument, "grid times must be non-negative and sorted");
    }
  }
}

// Independent compensated Poisson clocks, one per jump direction.
struct PoissonClocks {
  std::vector<double> next;
  std::vector<std::exponential_distribution<double>> wait;

  PoissonClocks(const LimitSpec& spec, std::mt19937_64& rng) {
    for (const auto& p : spec.poisson) {
      wait.emplace_back(p.intensity);
      next.push_back(wait.back()(rng));
    }
  }
};

}  // namespace

std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path_index),
                    static_cast<std::uint32_t>(path_index >> 32)};
  return std::mt19937_64(seq);
}

std::size_t step_count(double h, double t_final) {
  if (!(h > 0.0)) throw Error(ErrorCode::NonPositiveStep, "step must be positive");
  if (!(t_final >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative time");
  return static_cast<std::size_t>(std::floor(t_final / h + 1e-9));
}

Path walk_path(const ObtuseRV& rv, double h, double t_final, std::uint64_t seed,
               std::uint64_t path_index) {
  const std::size_t steps = step_count(h, t_final);
  if (steps == 0) throw Error(ErrorCode::InvalidArgument, "T must be at least h");
  auto rng = path_engine(seed, path_index);
  auto law = atom_law(rv);
  const double sh = std::sqrt(h);

  Path path;
  path.kind = Path::Kind::Walk;
  path.times.reserve(steps + 1);
  path.values.reserve(steps + 1);
  path.times.push_back(0.0);
  path.values.push_back(ComplexVector::Zero(rv.dim()));
  for (std::size_t k = 1; k <= steps; ++k) {
    const std::size_t atom = law(rng);
    path.atoms.push_back(atom);
    path.times.push_back(k * h);
    path.values.push_back(path.values.back() + sh * rv.value(atom));
  }
  return path;
}

std::vector<std::size_t> sample_atoms(const ObtuseRV& rv, std::size_t count, std::uint64_t seed,
                                      std::uint64_t path_index) {
  auto rng = path_engine(seed, path_index);
  auto law = atom_law(rv);
  std::vector<std::size_t> out(count);
  for (auto& a : out) a = law(rng);
  return out;
}

Path limit_path(const LimitSpec& spec, double t_final, double dt, std::uint64_t seed,
                std::uint64_t path_index) {
  const std::size_t steps = step_count(dt, t_final);
  auto rng = path_engine(seed, path_index);
  std::normal_distribution<double> gauss;
  PoissonClocks clocks(spec, rng);
  const double sdt = std::sqrt(dt);

  Path path;
  path.kind = Path::Kind::Limit;
  path.times.push_back(0.0);
  path.values.push_back(ComplexVector::Zero(spec.dim));
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = k * dt;
    ComplexVector z = path.values.back();
    for (const auto& b : spec.brownian) z += (sdt * gauss(rng)) * b;
    for (std::size_t a = 0; a < spec.poisson.size(); ++a) {
      const auto& dir = spec.poisson[a];
      while (clocks.next[a] <= t) {
        z += dir.v;
        path.jumps.push_back({clocks.next[a], a, dir.v});
        clocks.next[a] += clocks.wait[a](rng);
      }
      z -= (dir.intensity * dt) * dir.v;
    }
    path.times.push_back(t);
    path.values.push_back(std::move(z));
  }
  return path;
}

SampledPaths sample_walk(const ObtuseRV& rv, double h, const std::vector<double>& grid,
                         std::size_t n_paths, std::uint64_t seed) {
  check_grid(grid);
  std::vector<std::size_t> stops;
  for (double t : grid) stops.push_back(step_count(h, t));
  const double sh = std::sqrt(h);

  SampledPaths out;
  out.grid = grid;
  out.dim = rv.dim();
  out.values.resize(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) {
    auto rng = path_engine(seed, p);
    auto law = atom_law(rv);
    ComplexVector z = ComplexVector::Zero(rv.dim());
    std::size_t done = 0;
    for (std::size_t stop : stops) {
      for (; done < stop; ++done) z += sh * rv.value(law(rng));
      out.values[p].push_back(z);
    }
  }
  return out;
}

SampledPaths sample_limit(const LimitSpec& spec, const std::vector<double>& grid,
                          std::size_t n_paths, std::uint64_t seed) {
  check_grid(grid);
  SampledPaths out;
  out.grid = grid;
  out.dim = spec.dim;
  out.values.resize(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) {
    auto rng = path_engine(seed, p);
    std::normal_distribution<double> gauss;
    PoissonClocks clocks(spec, rng);
    ComplexVector z = ComplexVector::Zero(spec.dim);
    double now = 0;
    for (double t : grid) {
      const double sd = std::sqrt(t - now);
      for (const auto& b : spec.brownian) z += (sd * gauss(rng)) * b;
      for (std::size_t a = 0; a < spec.poisson.size(); ++a) {
        const auto& dir = spec.poisson[a];
        while (clocks.next[a] <= t) {
          z += dir.v;
          clocks.next[a] += clocks.wait[a](rng);
        }
        z -= (dir.intensity * (t - now)) * dir.v;
      }
      now = t;
      out.values[p].push_back(z);
    }
  }
  return out;
}

std::vector<ComplexVector> values_at(const Path& path, const std::vector<double>& grid) {
  check_grid(grid);
  std::vector<ComplexVector> out;
  for (double t : grid) {
    const double key = t + 1e-12 * std::max(1.0, t);
    auto it = std::upper_bound(path.times.begin(), path.times.end(), key);
    if (it == path.times.begin()) {
      throw Error(ErrorCode::InvalidArgument, "grid time before the start of the path");
    }
    out.push_back(path.values[std::distance(path.times.begin(), it) - 1]);
  }
  return out;
}

SampledPaths to_sampled(const std::vector<Path>& paths, const std::vector<double>& grid) {
  SampledPaths out;
  out.grid = grid;
  out.dim = paths.empty() ? 0 : paths.front().dim();
  for (const auto& p : paths) out.values.push_back(values_at(p, grid));
  return out;
}

double BracketEstimate::worst_score(double k_se, double floor) const {
  double worst = 0;
  auto sweep = [&](const ComplexMatrix& res, const RealMatrix& sre, const RealMatrix& sim) {
    for (Eigen::Index i = 0; i < res.rows(); ++i)
      for (Eigen::Index j = 0; j < res.cols(); ++j) {
        worst = std::max(worst, std::abs(res(i, j).real()) / (k_se * sre(i, j) + floor));
        worst = std::max(worst, std::abs(res(i, j).imag()) / (k_se * sim(i, j) + floor));
      }
  };
  sweep(residual, se_re, se_im);
  sweep(conj_residual, conj_se_re, conj_se_im);
  return worst;
}

BracketEstimate empirical_brackets(const std::vector<Path>& paths, const Tensor3& m) {
  const std::size_t n = paths.empty() ? 0 : paths.front().dim();
  if (m.dim() != n + 1) {
    throw Error(ErrorCode::DimensionMismatch, "structure tensor must live on C^{N+1}");
  }
  BracketEstimate est;
  est.bracket = ComplexMatrix::Zero(n, n);
  est.conj_bracket = ComplexMatrix::Zero(n, n);
  est.residual = ComplexMatrix::Zero(n, n);
  est.conj_residual = ComplexMatrix::Zero(n, n);
  RealMatrix sq_re = RealMatrix::Zero(n, n), sq_im = RealMatrix::Zero(n, n);
  RealMatrix csq_re = RealMatrix::Zero(n, n), csq_im = RealMatrix::Zero(n, n);

  for (const auto& path : paths) {
    if (path.dim() != n) throw Error(ErrorCode::DimensionMismatch, "paths differ in dimension");
    for (std::size_t s = 1; s < path.times.size(); ++s) {
      const ComplexVector dz = path.values[s] - path.values[s - 1];
      const double dt = path.times[s] - path.times[s - 1];
      est.total_time += dt;
      ++est.increments;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          Complex drift = m(i + 1, j + 1, 0) * dt;
          Complex cdrift = (i == j ? dt : 0.0);
          for (std::size_t q = 0; q < n; ++q) {
            drift += m(i + 1, j + 1, q + 1) * dz(q);
            cdrift += std::conj(m(i + 1, q + 1, j + 1)) * dz(q);
          }
          const Complex prod = dz(i) * dz(j);
          const Complex cprod = std::conj(dz(i)) * dz(j);
          const Complex r = prod - drift, c = cprod - cdrift;
          est.bracket(i, j) += prod;
          est.conj_bracket(i, j) += cprod;
          est.residual(i, j) += r;
          est.conj_residual(i, j) += c;
          sq_re(i, j) += r.real() * r.real();
          sq_im(i, j) += r.imag() * r.imag();
          csq_re(i, j) += c.real() * c.real();
          csq_im(i, j) += c.imag() * c.imag();
        }
    }
  }
  if (est.increments < 100) {
    throw Error(ErrorCode::TooFewIncrements,
                std::to_string(est.increments) + " increments, need at least 100");
  }
  // The residual sum of K i.i.d. terms has standard error sqrt(K) * sd.
  const double k = static_cast<double>(est.increments);
  auto se = [k](const RealMatrix& sq, const RealMatrix& sum) {
    RealMatrix var = sq / k - (sum / k).cwiseAbs2();
    return (k * var.cwiseMax(0.0)).cwiseSqrt().eval();
  };
  est.se_re = se(sq_re, est.residual.real());
  est.se_im = se(sq_im, est.residual.imag());
  est.conj_se_re = se(csq_re, est.conj_residual.real());
  est.conj_se_im = se(csq_im, est.conj_residual.imag());
  return est;
}

BracketEstimate empirical_brackets(const Path& path, const Tensor3& m) {
  return empirical_brackets(std::vector<Path>{path}, m);
}

double MomentReport::second_moment_distance() const {
  return std::max(max_covariance, max_pseudo);
}

MomentReport distribution_compare(const SampledPaths& a, const SampledPaths& b) {
  if (a.grid.size() != b.grid.size()) {
    throw Error(ErrorCode::DimensionMismatch, "ensembles sampled on different grids");
  }
  for (std::size_t g = 0; g < a.grid.size(); ++g) {
    if (std::abs(a.grid[g] - b.grid[g]) > 1e-12 * std::max(1.0, a.grid[g])) {
      throw Error(ErrorCode::DimensionMismatch, "ensembles sampled on different grids");
    }
  }
  MomentReport report;
  if (a.values.empty() || b.values.empty()) {
    for (double t : a.grid) report.per_time.push_back({.t = t});
    return report;
  }
  if (a.dim != b.dim) throw Error(ErrorCode::DimensionMismatch, "ensembles differ in dimension");
  const std::size_t n = a.dim;

  struct Moments {
    ComplexVector mean;
    ComplexMatrix cov, pseudo;
    RealVector fourth;
  };
  auto moments = [n](const SampledPaths& s, std::size_t g) {
    Moments mo{ComplexVector::Zero(n), ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n),
               RealVector::Zero(n)};
    for (const auto& path : s.values) {
      const ComplexVector& z = path[g];
      mo.mean += z;
      mo.cov += z.conjugate() * z.transpose();
      mo.pseudo += z * z.transpose();
      mo.fourth += z.cwiseAbs2().cwiseAbs2();
    }
    const double inv = 1.0 / static_cast<double>(s.values.size());
    mo.mean *= inv;
    mo.cov *= inv;
    mo.pseudo *= inv;
    mo.fourth *= inv;
    return mo;
  };
  for (std::size_t g = 0; g < a.grid.size(); ++g) {
    const Moments ma = moments(a, g), mb = moments(b, g);
    MomentDistances d;
    d.t = a.grid[g];
    d.mean = max_abs(ma.mean - mb.mean);
    d.covariance = max_abs(ma.cov - mb.cov);
    d.pseudo = max_abs(ma.pseudo - mb.pseudo);
    d.fourth = max_abs(ma.fourth - mb.fourth);
    report.max_mean = std::max(report.max_mean, d.mean);
    report.max_covariance = std::max(report.max_covariance, d.covariance);
    report.max_pseudo = std::max(report.max_pseudo, d.pseudo);
    report.max_fourth = std::max(report.max_fourth, d.fourth);
    report.per_time.push_back(d);
  }
  return report;
}

MomentReport distribution_compare(const std::vector<Path>& a, const std::vector<Path>& b,
                                  const std::vector<double>& grid) {
  return distribution_compare(to_sampled(a, grid), to_sampled(b, grid));
}

void write_paths_csv(std::ostream& os, const std::vector<Path>& paths) {
  const std::size_t n = paths.empty() ? 0 : paths.front().dim();
  os << "path,t";
  for (std::size_t i = 1; i <= n; ++i) os << ",re" << i << ",im" << i;
  os << "\n";
  os << std::setprecision(17);
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const auto& path = paths[p];
    for (std::size_t s = 0; s < path.times.size(); ++s) {
      os << p << "," << path.times[s];
      for (std::size_t i = 0; i < n; ++i) {
        os << "," << path.values[s](i).real() << "," << path.values[s](i).imag();
      }
      os << "\n";
    }
  }
}

}  // namespace obtuse
