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

// End-to-end acceptance run: one PASS/FAIL line per criterion, non-zero exit
// status when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "obtuse/catalog.hpp"
#include "obtuse/cli.hpp"
#include "obtuse/io.hpp"
#include "obtuse/mult_ops.hpp"
#include "obtuse/scaling_limit.hpp"
#include "obtuse/simulate.hpp"
#include "obtuse/takagi.hpp"
#include "obtuse/tensor_diag.hpp"
#include "support/oracles.hpp"

namespace {

using namespace obtuse;
using testing::Rng;
const Complex I(0.0, 1.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << x;
  return os.str();
}

// Reference tensor of the three-point system: entry [j][i][k] = S^{ij}_k.
Tensor3 reference_three_point_tensor() {
  const Complex a = (1.0 - 2.0 * I) / 5.0, b = (2.0 + I) / 5.0;
  const Complex table[3][3][3] = {
      {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
      {{0, 1, 0}, {-a, 0, -2.0 * b}, {-2.0 * a, 0, b}},
      {{0, 0, 1}, {-2.0 * a, 0, b}, {a, -I, -a}},
  };
  Tensor3 s(3, true);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t k = 0; k < 3; ++k) s(i, j, k) = table[j][i][k];
  return s;
}

ObtuseSystem constant_law(double) { return catalog::three_point_system(); }

LimitEstimate limit_of(ObtuseSystem (*law)(double)) {
  return limit_tensor(
      sample_family([law](double h) { return tensor_of(law(h)); }, geometric_grid(0.1, 5)));
}

Outcome golden_tensor() {
  const auto dir = std::filesystem::temp_directory_path() / "obtuse_acceptance";
  std::filesystem::create_directories(dir);
  const std::string sys_file = (dir / "three_point.json").string();
  io::write_text_file(sys_file, io::dump(io::system_to_json(catalog::three_point_system())));
  std::ostringstream out, err;
  const int code = cli::run({"obtuse", "tensor", sys_file}, out, err);
  std::filesystem::remove_all(dir);
  if (code != 0) return {false, "tensor command exited with " + std::to_string(code)};
  const Tensor3 s = io::tensor_from_json(io::Json::parse(out.str()));
  const double err_max = (s - reference_three_point_tensor()).max_abs();
  return {err_max <= 1e-12, "max entry error " + fmt(err_max)};
}

Outcome symmetry_suite() {
  Rng rng(20260001);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto sys = testing::random_obtuse_system(1 + trial % 6, rng);
    const auto r = check_symmetries(tensor_of(sys), 1e-10);
    worst = std::max({worst, r.sym0, r.sym1, r.sym2, r.sym3});
  }
  return {worst <= 1e-10, "worst residual " + fmt(worst) + " over 100 systems"};
}

Outcome takagi_suite() {
  Rng rng(20260002);
  double worst_res = 0, worst_unit = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 15;
    const ComplexMatrix m = testing::random_symmetric(n, rng);
    const auto t = takagi(m);
    worst_res = std::max(worst_res,
                         max_abs(m - t.u * t.d.cast<Complex>().asDiagonal() * t.u.transpose()));
    worst_unit = std::max(worst_unit, unitarity_defect(t.u));
  }
  return {worst_res <= 1e-10 && worst_unit <= 1e-12,
          "residual " + fmt(worst_res) + ", |U*U - I| " + fmt(worst_unit)};
}

Outcome diagonalization_bijection() {
  Rng rng(20260003);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 1 + trial % 6;
    const std::size_t count = 1 + (trial / 6) % dim;
    const auto family = testing::random_orthogonal_family(dim, count, rng);
    const auto r = diagonalize(tensor_from_family(family), kDefaultTol, trial);
    worst = std::max(worst, testing::set_distance(r.vectors, family));
  }
  const auto sys = obtuse_fixed_points(reference_three_point_tensor());
  const auto ref = catalog::three_point_system();
  double value_err = testing::set_distance(sys.values(), ref.values());
  double prob_err = 0;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    // match each recovered atom to its reference by value
    std::size_t best = 0;
    for (std::size_t k = 1; k < ref.size(); ++k) {
      if ((sys.value(i) - ref.value(k)).norm() < (sys.value(i) - ref.value(best)).norm()) best = k;
    }
    prob_err = std::max(prob_err, std::abs(sys.probability(i) - ref.probability(best)));
  }
  const double expected[3] = {1.0 / 3, 1.0 / 4, 5.0 / 12};
  for (std::size_t k = 0; k < 3; ++k) {
    prob_err = std::max(prob_err, std::abs(ref.probability(k) - expected[k]));
  }
  return {worst <= 1e-8 && value_err <= 1e-10 && prob_err <= 1e-10,
          "round trip " + fmt(worst) + ", fixed points " + fmt(value_err) + ", probabilities " +
              fmt(prob_err)};
}

Outcome real_criterion() {
  const Tensor3 imag = tensor_of(catalog::imaginary_bernoulli());
  double imag_part = 0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) imag_part = std::max(imag_part, std::abs(imag(i, j, k).imag()));
  const bool imag_flag = is_real_tensor(imag);
  const bool real_flag = is_real_tensor(tensor_of(catalog::real_bernoulli()));
  return {imag_part == 0.0 && !imag_flag && real_flag,
          std::string("(i,-i): entries real, is_real ") + (imag_flag ? "true" : "false") +
              "; (1,-1): is_real " + (real_flag ? "true" : "false")};
}

Outcome realification() {
  Rng rng(20260006);
  double s0 = 0, im = 0, prob = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto sys = testing::random_obtuse_system(1 + trial % 6, rng);
    const Tensor3 s = tensor_of(sys);
    const auto r = realify(s, kDefaultTol, trial);
    const std::size_t n = sys.dim();
    s0 = std::max(s0, max_abs(r.v * r.v.transpose() - s.lower_slice(0).bottomRightCorner(n, n)));
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j <= n; ++j)
        for (std::size_t k = 0; k <= n; ++k) im = std::max(im, std::abs(r.r(i, j, k).imag()));
    auto p = sys.probabilities(), q = r.real_system.probabilities();
    std::sort(p.begin(), p.end());
    std::sort(q.begin(), q.end());
    for (std::size_t i = 0; i < p.size(); ++i) prob = std::max(prob, std::abs(p[i] - q[i]));
  }
  return {s0 <= 1e-9 && im <= 1e-8 && prob <= 1e-10,
          "|VV^t - S0| " + fmt(s0) + ", max |Im R| " + fmt(im) + ", probabilities " + fmt(prob)};
}

Outcome constant_walk_limit() {
  const auto est = limit_of(constant_law);
  const double m_err = est.m.restricted().max_abs();
  const double l_err = max_abs(lambda_of(est.m) - testing::constant_walk_lambda());
  const auto spec = classify(est.m);
  const double vv = max_abs(spec.v * spec.v.transpose() - spec.lambda);
  const double unit = unitarity_defect(spec.v);
  const bool ok = m_err <= 1e-10 && l_err <= 1e-10 && spec.poisson.empty() && vv <= 1e-9 &&
                  unit <= 1e-12;
  return {ok, "|M| " + fmt(m_err) + ", |M0 - reference| " + fmt(l_err) + ", " +
                  std::to_string(spec.poisson.size()) + " jump directions, |VV^t - M0| " +
                  fmt(vv) + ", |V*V - I| " + fmt(unit)};
}

Outcome poisson_brownian_limit() {
  const auto est = limit_of(catalog::poisson_brownian_system);
  const double c = 1.0 / (2.0 * std::sqrt(2.0));
  // reference matrices, row i and column k
  ComplexMatrix m1(2, 2), m2(2, 2), m0(2, 2);
  m1 << c, -I * c, I * c, c;
  m2 << I * c, c, -c, I * c;
  m0 << 0.0, I, I, 0.0;
  double err = max_abs(lambda_of(est.m) - m0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) {
      err = std::max(err, std::abs(est.m(i + 1, 1, k + 1) - m1(i, k)));
      err = std::max(err, std::abs(est.m(i + 1, 2, k + 1) - m2(i, k)));
    }
  const auto spec = classify(est.m);
  ComplexVector w(2), b(2);
  w << 1.0 / std::sqrt(2.0), I / std::sqrt(2.0);
  b << I, 1.0;
  double dir_err = 1.0, intensity_err = 1.0, brown_err = 1.0;
  if (spec.poisson.size() == 1) {
    dir_err = (spec.poisson[0].v - w).norm();
    intensity_err = std::abs(spec.poisson[0].intensity - 1.0);
  }
  if (spec.brownian.size() == 1) {
    // proportional to (i, 1): the component orthogonal to it vanishes
    const ComplexVector u = b.normalized();
    brown_err = (spec.brownian[0] - u.dot(spec.brownian[0]) * u).norm();
  }
  const double vv = max_abs(spec.v * spec.v.transpose() - m0);
  const double unit = unitarity_defect(spec.v);
  const bool ok = err <= 1e-6 && spec.poisson.size() == 1 && dir_err <= 1e-8 &&
                  intensity_err <= 1e-8 && spec.brownian.size() == 1 && brown_err <= 1e-8 &&
                  vv <= 1e-9 && unit <= 1e-12;
  return {ok, "limit " + fmt(err) + ", jump direction " + fmt(dir_err) + ", intensity " +
                  fmt(intensity_err) + ", Brownian " + fmt(brown_err) + ", |VV^t - M0| " +
                  fmt(vv)};
}

Outcome mult_op_oracle() {
  Rng rng(20260009);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto sys = testing::random_obtuse_system(1 + trial % 5, rng);
    const Tensor3 s = tensor_of(sys);
    for (std::size_t i = 0; i <= sys.dim(); ++i) {
      worst = std::max(worst, max_abs(mult_op(s, i) - direct_mult_op(sys, i)));
    }
  }
  double chain = 0;
  for (std::size_t n_dim = 1; n_dim <= 2; ++n_dim) {
    for (std::size_t sites = 1; sites <= 3; ++sites) {
      const auto sys = testing::random_obtuse_system(n_dim, rng);
      const Tensor3 s = tensor_of(sys);
      for (std::size_t i = 0; i <= n_dim; ++i) {
        const ComplexMatrix got = testing::to_dense(chain_mult_op(s, i, sites, 0.01));
        chain = std::max(chain, max_abs(got - testing::chain_oracle(sys, i, sites, 0.01)));
      }
    }
  }
  return {worst <= 1e-12 && chain <= 1e-10,
          "single site " + fmt(worst) + ", chains " + fmt(chain)};
}

constexpr std::size_t kPaths = 20000;
constexpr std::uint64_t kSeed = 0;
constexpr double kFinal = 1.0;

struct SecondMoments {
  ComplexMatrix cov, pseudo;
};

SecondMoments at_final_time(const SampledPaths& s) {
  const std::size_t n = s.dim;
  SecondMoments out{ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n)};
  for (const auto& p : s.values) {
    out.cov += p.back().conjugate() * p.back().transpose();
    out.pseudo += p.back() * p.back().transpose();
  }
  const double k = static_cast<double>(s.values.size()) * kFinal;
  out.cov /= k;
  out.pseudo /= k;
  return out;
}

Outcome statistical_suite() {
  std::ostringstream detail;
  bool ok = true;
  const std::vector<double> grid{0.25, 0.5, 0.75, 1.0};
  const LimitSpec spec1 = classify(limit_of(constant_law).m);
  const LimitSpec spec2 = classify(limit_of(catalog::poisson_brownian_system).m);

  // (a) walk normalization at h = 0.01
  double a = 0;
  for (const auto& sys : {catalog::three_point_system(), catalog::poisson_brownian_system(0.01)}) {
    const auto mo = at_final_time(sample_walk(sys, 0.01, {kFinal}, kPaths, kSeed));
    a = std::max(a, max_abs(mo.cov - ComplexMatrix::Identity(2, 2)));
  }
  ok = ok && a <= 0.05;
  detail << "(a) " << fmt(a);

  // (b) and (c) on limit paths recorded at dt = 0.01
  double b = 0, c = 0;
  for (const LimitSpec* spec : {&spec1, &spec2}) {
    std::vector<Path> paths;
    paths.reserve(kPaths);
    for (std::size_t p = 0; p < kPaths; ++p) paths.push_back(limit_path(*spec, kFinal, 0.01, kSeed, p));
    const auto mo = at_final_time(to_sampled(paths, {kFinal}));
    b = std::max({b, max_abs(mo.pseudo - spec->lambda),
                  max_abs(mo.cov - ComplexMatrix::Identity(2, 2))});
    c = std::max(c, empirical_brackets(paths, full_limit_tensor(*spec)).worst_score());
  }
  ok = ok && b <= 0.05 && c <= 1.0;
  detail << ", (b) " << fmt(b) << ", (c) " << fmt(5 * c) << " SE";

  // (d) walk-vs-limit second-moment distance along h, for a step law whose
  // second moments converge at rate sqrt(h)
  const auto limit_samples = sample_limit(spec1, grid, kPaths, kSeed + 1);
  std::vector<double> dist;
  for (double h : {0.1, 0.01, 0.001}) {
    const auto walk = sample_walk(catalog::drifting_three_point_system(h), h, grid, kPaths, kSeed);
    dist.push_back(distribution_compare(walk, limit_samples).second_moment_distance());
  }
  int inversions = 0;
  for (std::size_t i = 0; i < dist.size(); ++i)
    for (std::size_t j = i + 1; j < dist.size(); ++j) inversions += dist[j] >= dist[i];
  ok = ok && inversions <= 1;
  detail << ", (d) distances " << fmt(dist[0]) << " " << fmt(dist[1]) << " " << fmt(dist[2]);

  // reference only: the three-point walk has the limit's exact second moments
  std::vector<double> flat;
  for (double h : {0.1, 0.01, 0.001}) {
    const auto walk = sample_walk(catalog::three_point_system(), h, grid, kPaths, kSeed);
    flat.push_back(distribution_compare(walk, limit_samples).second_moment_distance());
  }
  detail << " [constant law " << fmt(flat[0]) << " " << fmt(flat[1]) << " " << fmt(flat[2])
         << "]";
  return {ok, detail.str()};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "golden tensor", 1, golden_tensor},
      {2, "symmetry relations", 10, symmetry_suite},
      {3, "Takagi factorization", 30, takagi_suite},
      {4, "diagonalization bijection", 60, diagonalization_bijection},
      {5, "real criterion", 60, real_criterion},
      {6, "realification", 60, realification},
      {7, "limit of the constant walk", 60, constant_walk_limit},
      {8, "limit of the Poisson-Brownian walk", 60, poisson_brownian_limit},
      {9, "multiplication operators", 60, mult_op_oracle},
      {10, "statistical suite", 300, statistical_suite},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) {
      o.pass = false;
      o.detail += "; over the " + fmt(c.budget_seconds) + " s budget";
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << c.id << "  " << c.name
              << " (" << std::fixed << std::setprecision(2) << secs << " s): "
              << std::defaultfloat << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " failing")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
