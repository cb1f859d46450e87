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

// Monte-Carlo paths of rescaled obtuse walks and of limit normal martingales.
//
// Randomness: every path owns a std::mt19937_64 seeded through std::seed_seq
// with the 32-bit halves of (seed, path_index). Draws go through the standard
// distributions, so a path is reproducible for a given standard library.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "obtuse/obtuse_core.hpp"
#include "obtuse/scaling_limit.hpp"

namespace obtuse {

std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path_index);

struct Jump {
  double time = 0;
  std::size_t direction = 0;  ///< index into LimitSpec::poisson
  ComplexVector size;
};

struct Path {
  enum class Kind { Walk, Limit };
  Kind kind = Kind::Walk;
  std::vector<double> times;           ///< starts at 0
  std::vector<ComplexVector> values;   ///< Z at each time, Z_0 = 0
  std::vector<std::size_t> atoms;      ///< walk only: atom drawn at each step
  std::vector<Jump> jumps;             ///< limit only

  std::size_t dim() const { return values.empty() ? 0 : values.front().size(); }
  std::size_t increments() const { return times.empty() ? 0 : times.size() - 1; }
};

/// Number of steps of length h fitting in [0, T] (rounding guards k h = T).
std::size_t step_count(double h, double t_final);

/// Z_{kh} = sum_{m <= k} sqrt(h) X_m for k = 0 .. floor(T/h).
/// Throws NonPositiveStep or InvalidArgument when T < h.
Path walk_path(const ObtuseRV& rv, double h, double t_final, std::uint64_t seed,
               std::uint64_t path_index = 0);

/// `count` i.i.d. atom indices drawn like the steps of a walk path.
std::vector<std::size_t> sample_atoms(const ObtuseRV& rv, std::size_t count,
                                      std::uint64_t seed, std::uint64_t path_index = 0);

/// Brownian motion along spec.brownian plus compensated Poisson processes
/// along spec.poisson, recorded on the grid k dt; jumps are exact in time.
Path limit_path(const LimitSpec& spec, double t_final, double dt, std::uint64_t seed,
                std::uint64_t path_index = 0);

/// Values of many paths at a few fixed times.
struct SampledPaths {
  std::vector<double> grid;
  std::vector<std::vector<ComplexVector>> values;  ///< [path][grid index]
  std::size_t dim = 0;
};

/// Walk values at the grid times (last step not after t), drawn from the
/// same stream as walk_path so the two agree path by path.
SampledPaths sample_walk(const ObtuseRV& rv, double h, const std::vector<double>& grid,
                         std::size_t n_paths, std::uint64_t seed);

/// Limit martingale values at the grid times, exact in law.
SampledPaths sample_limit(const LimitSpec& spec, const std::vector<double>& grid,
                          std::size_t n_paths, std::uint64_t seed);

/// Values of a path at the grid times (last recorded time not after t).
std::vector<ComplexVector> values_at(const Path& path, const std::vector<double>& grid);

SampledPaths to_sampled(const std::vector<Path>& paths, const std::vector<double>& grid);

/// Realized brackets of one or more paths against the structure equations
///   [Z^i, Z^j]_t      = L_ij t + sum_k M^{ij}_k Z^k_t
///   [conj Z^i, Z^j]_t = d_ij t + sum_k conj(M^{ik}_j) Z^k_t
/// where `m` is a full tensor on {0..N} holding L in its lower slice 0. For a
/// walk of step h pass rescale_tensor(S, h). Per-increment residuals are
/// i.i.d. and centered, which gives the standard errors.
struct BracketEstimate {
  std::size_t increments = 0;
  double total_time = 0;
  ComplexMatrix bracket;        ///< sum over all paths of [Z^i, Z^j]_T
  ComplexMatrix conj_bracket;   ///< sum over all paths of [conj Z^i, Z^j]_T
  ComplexMatrix residual;       ///< bracket minus its structure-equation value
  ComplexMatrix conj_residual;
  RealMatrix se_re, se_im;      ///< standard errors of residual
  RealMatrix conj_se_re, conj_se_im;

  /// Largest |residual| / (k se + floor) over real and imaginary parts.
  double worst_score(double k_se = 5.0, double floor = 1e-9) const;
  bool within(double k_se = 5.0, double floor = 1e-9) const {
    return worst_score(k_se, floor) <= 1.0;
  }
};

/// Throws TooFewIncrements below 100 increments in total.
BracketEstimate empirical_brackets(const std::vector<Path>& paths, const Tensor3& m);
BracketEstimate empirical_brackets(const Path& path, const Tensor3& m);

struct MomentDistances {
  double t = 0;
  double mean = 0;        ///< max |E[Z] - E[Z']|
  double covariance = 0;  ///< max |E[conj Z Z^t] - E[conj Z' Z'^t]|
  double pseudo = 0;      ///< max |E[Z Z^t] - E[Z' Z'^t]|
  double fourth = 0;      ///< max_i |E|Z^i|^4 - E|Z'^i|^4|
};

struct MomentReport {
  std::vector<MomentDistances> per_time;
  double max_mean = 0, max_covariance = 0, max_pseudo = 0, max_fourth = 0;

  /// max(covariance, pseudo): the second-moment distance.
  double second_moment_distance() const;
};

/// Empirical moment distances between two path ensembles on a common grid.
MomentReport distribution_compare(const SampledPaths& a, const SampledPaths& b);
MomentReport distribution_compare(const std::vector<Path>& a, const std::vector<Path>& b,
                                  const std::vector<double>& grid);

/// Long format: path,t,re1,im1,...; 17 significant digits.
void write_paths_csv(std::ostream& os, const std::vector<Path>& paths);

}  // namespace obtuse
