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

#include "obtuse/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "obtuse/catalog.hpp"
#include "obtuse/io.hpp"
#include "obtuse/mult_ops.hpp"
#include "obtuse/scaling_limit.hpp"
#include "obtuse/simulate.hpp"
#include "obtuse/tensor_diag.hpp"

namespace obtuse::cli {

namespace {

using io::Json;

struct Config {
  std::string input;
  std::string out;
  std::string system_file;
  std::string spec_file;
  std::string example;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  double h = 0.01;
  double t_final = 1.0;
  double dt = 0.01;
  std::size_t paths = 100;
  bool json = false;
  bool limit = false;
};

class Emitter {
 public:
  Emitter(const Config& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  // Primary artifact: to --out when given, else stdout.
  void artifact(const Json& j) {
    if (cfg_.out.empty()) {
      out_ << io::dump(j) << "\n";
    } else {
      io::write_text_file(cfg_.out, io::dump(j) + "\n");
    }
  }

 private:
  const Config& cfg_;
  std::ostream& out_;
};

bool looks_like_system(const Json& j) { return j.is_object() && j.contains("values"); }

Tensor3 tensor_input(const Json& j, double tol) {
  if (looks_like_system(j)) return tensor_of(io::system_from_json(j, tol));
  return io::tensor_from_json(j);
}

int cmd_validate(const Config& cfg, std::ostream& out) {
  const Json j = io::read_json_file(cfg.input);
  io::SystemInput in = io::system_input_from_json(j);
  const ObtuseValidation report = validate_obtuse_system(in.values, cfg.tol);
  bool ok = report.valid;
  std::string prob_error;
  if (ok && !in.probabilities.empty()) {
    try {
      ObtuseSystem::from_values(in.values, in.probabilities, cfg.tol);
    } catch (const Error& e) {
      ok = false;
      prob_error = e.what();
    }
  }
  if (cfg.json) {
    Json r = io::validation_to_json(report);
    if (!prob_error.empty()) r["error"] = prob_error;
    r["valid"] = ok;
    out << io::dump(r) << "\n";
  } else {
    out << std::setprecision(17);
    out << (ok ? "valid" : "invalid") << " obtuse system of C^" << report.dim << "\n";
    out << "probabilities:";
    for (double p : report.probabilities) out << " " << p;
    out << "\nmax |<v_i, v_j> + 1|: " << report.max_pair_residual() << "\n";
    if (report.offending_pair) {
      out << "offending pair: (" << report.offending_pair->first + 1 << ","
          << report.offending_pair->second + 1 << ")\n";
    }
    if (!prob_error.empty()) out << prob_error << "\n";
  }
  return ok ? kSuccess : kDomainFailure;
}

int cmd_tensor(const Config& cfg, std::ostream& out) {
  const ObtuseSystem sys = io::system_from_json(io::read_json_file(cfg.input), cfg.tol);
  Emitter(cfg, out).artifact(io::tensor_to_json(tensor_of(sys)));
  return kSuccess;
}

int cmd_diagonalize(const Config& cfg, std::ostream& out) {
  const Tensor3 s = tensor_input(io::read_json_file(cfg.input), cfg.tol);
  const auto sym = check_symmetries(s, cfg.tol, true);
  if (s.constant_coordinate() && sym.sym0 <= cfg.tol * std::max(1.0, s.max_abs())) {
    Emitter(cfg, out).artifact(io::system_to_json(obtuse_fixed_points(s, cfg.tol, cfg.seed)));
  } else {
    const DiagResult d = diagonalize(s, cfg.tol, cfg.seed);
    Json j = io::family_to_json(d.vectors);
    j["residual"] = d.residual;
    Emitter(cfg, out).artifact(j);
  }
  return kSuccess;
}

int cmd_realify(const Config& cfg, std::ostream& out) {
  const Tensor3 s = tensor_input(io::read_json_file(cfg.input), cfg.tol);
  const RealificationResult r = realify(s, cfg.tol, cfg.seed);
  Emitter(cfg, out).artifact(Json{{"V", io::matrix_to_json(r.v)},
                                  {"s0_residual", r.s0_residual},
                                  {"real_criterion_residual", real_criterion_residual(r.r)},
                                  {"real_system", io::system_to_json(r.real_system)},
                                  {"R", io::tensor_to_json(r.r)}});
  return kSuccess;
}

int cmd_limit(const Config& cfg, std::ostream& out) {
  const TensorFamily fam = io::tensor_family_from_json(io::read_json_file(cfg.input), cfg.tol);
  const LimitEstimate est = limit_tensor(fam, cfg.tol);
  const LimitSpec spec = classify(est.m, cfg.tol, cfg.seed);
  Json j = io::limit_spec_to_json(spec);
  j["extrapolation"] = Json{{"samples", fam.size()},
                            {"min_contraction", std::isfinite(est.min_contraction)
                                                    ? Json(est.min_contraction)
                                                    : Json(nullptr)},
                            {"error_estimate", est.error_estimate}};
  Emitter(cfg, out).artifact(j);
  return kSuccess;
}

Json second_moments(const SampledPaths& s, double t_final) {
  const std::size_t n = s.dim;
  ComplexVector mean = ComplexVector::Zero(n);
  ComplexMatrix cov = ComplexMatrix::Zero(n, n), pseudo = ComplexMatrix::Zero(n, n);
  for (const auto& p : s.values) {
    const ComplexVector& z = p.back();
    mean += z;
    cov += z.conjugate() * z.transpose();
    pseudo += z * z.transpose();
  }
  const double k = static_cast<double>(s.values.size());
  mean /= k;
  cov /= k * t_final;
  pseudo /= k * t_final;
  return Json{{"mean", io::vector_to_json(mean)},
              {"covariance_over_T", io::matrix_to_json(cov)},
              {"pseudo_covariance_over_T", io::matrix_to_json(pseudo)}};
}

int cmd_simulate(const Config& cfg, std::ostream& out) {
  if (cfg.system_file.empty() && cfg.spec_file.empty()) {
    throw Error(ErrorCode::InvalidArgument, "simulate needs --system or --spec");
  }
  std::optional<ObtuseSystem> sys;
  std::optional<LimitSpec> spec;
  if (!cfg.system_file.empty()) {
    sys = io::system_from_json(io::read_json_file(cfg.system_file), cfg.tol);
  }
  if (!cfg.spec_file.empty()) spec = io::limit_spec_from_json(io::read_json_file(cfg.spec_file));

  Json stats{{"paths", cfg.paths}, {"T", cfg.t_final}, {"seed", cfg.seed}};
  std::vector<Path> csv_paths;
  std::vector<double> grid;
  for (int q = 1; q <= 4; ++q) grid.push_back(cfg.t_final * q / 4.0);

  std::optional<SampledPaths> walk_samples, limit_samples;
  if (sys) {
    stats["walk"] = Json{{"h", cfg.h}};
    if (cfg.paths > 0) {
      std::vector<Path> paths;
      for (std::size_t p = 0; p < cfg.paths; ++p) {
        paths.push_back(walk_path(*sys, cfg.h, cfg.t_final, cfg.seed, p));
      }
      walk_samples = to_sampled(paths, grid);
      stats["walk"].update(second_moments(*walk_samples, cfg.t_final));
      const std::size_t incs = paths.size() * paths.front().increments();
      if (incs >= 100) {
        stats["walk"]["brackets"] =
            io::brackets_to_json(empirical_brackets(paths, rescale_tensor(tensor_of(*sys), cfg.h)));
      }
      if (!cfg.out.empty() && !spec) csv_paths = std::move(paths);
    }
  }
  if (spec) {
    stats["limit"] = Json{{"dt", cfg.dt}};
    if (cfg.paths > 0) {
      std::vector<Path> paths;
      for (std::size_t p = 0; p < cfg.paths; ++p) {
        paths.push_back(limit_path(*spec, cfg.t_final, cfg.dt, cfg.seed, p));
      }
      limit_samples = to_sampled(paths, grid);
      stats["limit"].update(second_moments(*limit_samples, cfg.t_final));
      const std::size_t incs = paths.size() * paths.front().increments();
      if (incs >= 100) {
        stats["limit"]["brackets"] =
            io::brackets_to_json(empirical_brackets(paths, full_limit_tensor(*spec)));
      }
      if (!cfg.out.empty() && !sys) csv_paths = std::move(paths);
    }
  }
  if (walk_samples && limit_samples) {
    stats["comparison"] = io::moments_to_json(distribution_compare(*walk_samples, *limit_samples));
  }
  if (!cfg.out.empty()) {
    std::ostringstream csv;
    write_paths_csv(csv, csv_paths);
    io::write_text_file(cfg.out, csv.str());
  }
  out << io::dump(stats) << "\n";
  return kSuccess;
}

int cmd_check(const Config& cfg, std::ostream& out) {
  const Tensor3 s = tensor_input(io::read_json_file(cfg.input), cfg.tol);
  Json report;
  bool ok = false;
  if (cfg.limit) {
    const auto r = check_limit_symmetries(s, cfg.tol);
    report = io::limit_symmetry_to_json(r);
    ok = r.ok();
  } else {
    const auto r = check_symmetries(s, cfg.tol);
    report = io::symmetry_to_json(r);
    report["real"] = is_real_tensor(s, cfg.tol);
    ok = r.ok();
  }
  if (cfg.json) {
    out << io::dump(report) << "\n";
  } else {
    out << std::setprecision(17);
    for (const auto& [k, v] : report.items()) out << k << ": " << v << "\n";
  }
  return ok ? kSuccess : kDomainFailure;
}

Json family_file(const std::function<ObtuseSystem(double)>& law) {
  Json samples = Json::array();
  for (double h : geometric_grid()) {
    samples.push_back(Json{{"h", h}, {"system", io::system_to_json(law(h))}});
  }
  return Json{{"samples", samples}};
}

int cmd_example(const Config& cfg, std::ostream& out) {
  Json j;
  if (cfg.example == "three-point") {
    j = io::system_to_json(catalog::three_point_system());
  } else if (cfg.example == "real-bernoulli") {
    j = io::system_to_json(catalog::real_bernoulli());
  } else if (cfg.example == "imaginary-bernoulli") {
    j = io::system_to_json(catalog::imaginary_bernoulli());
  } else if (cfg.example == "constant-family") {
    j = family_file([](double) { return catalog::three_point_system(); });
  } else if (cfg.example == "poisson-brownian-family") {
    j = family_file(catalog::poisson_brownian_system);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown example " + cfg.example);
  }
  Emitter(cfg, out).artifact(j);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Complex obtuse random variables, their 3-tensors and continuous-time limits",
               "obtuse"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "absolute tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_flag("--json", cfg.json, "machine-readable report");
    sub->add_option("--out", cfg.out, "output file");
  };

  auto* validate = app.add_subcommand("validate", "check an obtuse system file");
  validate->add_option("system", cfg.input, "system JSON")->required();
  common(validate);

  auto* tensor = app.add_subcommand("tensor", "3-tensor of an obtuse system");
  tensor->add_option("system", cfg.input, "system JSON")->required();
  common(tensor);

  auto* diag = app.add_subcommand("diagonalize", "fixed points of a doubly-symmetric tensor");
  diag->add_option("tensor", cfg.input, "tensor or system JSON")->required();
  common(diag);

  auto* real = app.add_subcommand("realify", "write an obtuse tensor as V o R with R real");
  real->add_option("input", cfg.input, "tensor or system JSON")->required();
  common(real);

  auto* limit = app.add_subcommand("limit", "limit tensor and law of a rescaled family");
  limit->add_option("family", cfg.input, "family JSON")->required();
  common(limit);

  auto* sim = app.add_subcommand("simulate", "Monte-Carlo walks and limit martingales");
  sim->set_help_flag("--help", "print this help and exit");  // -h would clash with --h
  sim->add_option("--system", cfg.system_file, "step law of the walk");
  sim->add_option("--spec", cfg.spec_file, "limit specification from `obtuse limit`");
  sim->add_option("--h", cfg.h, "walk step")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--T", cfg.t_final, "final time")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sim->add_option("--dt", cfg.dt, "limit path grid")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim->add_option("--paths", cfg.paths, "number of paths")->capture_default_str();
  common(sim);

  auto* check = app.add_subcommand("check", "symmetry relations of a tensor");
  check->add_option("tensor", cfg.input, "tensor or system JSON")->required();
  check->add_flag("--limit", cfg.limit, "relations of a limit tensor on {0..N}");
  common(check);

  auto* example = app.add_subcommand("example", "write a built-in input file");
  example->add_option("name", cfg.example, "built-in input")
      ->required()
      ->check(CLI::IsMember({"three-point", "real-bernoulli", "imaginary-bernoulli",
                             "constant-family", "poisson-brownian-family"}));
  common(example);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(std::move(rev));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageOrIo;
  }

  try {
    if (*validate) return cmd_validate(cfg, out);
    if (*tensor) return cmd_tensor(cfg, out);
    if (*diag) return cmd_diagonalize(cfg, out);
    if (*real) return cmd_realify(cfg, out);
    if (*limit) return cmd_limit(cfg, out);
    if (*sim) return cmd_simulate(cfg, out);
    if (*check) return cmd_check(cfg, out);
    if (*example) return cmd_example(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::IoError) ? kUsageOrIo
                                                                                : kDomainFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  return kUsageOrIo;
}

}  // namespace obtuse::cli
