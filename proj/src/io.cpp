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

#include "obtuse/io.hpp"

#include <fstream>
#include <sstream>

namespace obtuse::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::size_t size_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    bad(std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

// nlohmann reports type errors through its own exceptions; surface them as
// parse errors.
template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
}

}  // namespace

Json complex_to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_object()) bad("complex number must be {\"re\": x, \"im\": y}");
  const double re = j.contains("re") ? number(j.at("re"), "re") : 0.0;
  const double im = j.contains("im") ? number(j.at("im"), "im") : 0.0;
  if (!j.contains("re") && !j.contains("im")) bad("complex number without re/im");
  return {re, im};
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

ComplexVector vector_from_json(const Json& j) {
  if (!j.is_array()) bad("vector must be an array");
  ComplexVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = complex_from_json(j[i]);
  return v;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) bad("matrix must be an array of rows");
  if (j.empty()) return ComplexMatrix(0, 0);
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  ComplexMatrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const ComplexVector row = vector_from_json(j[r]);
    if (static_cast<std::size_t>(row.size()) != cols) bad("ragged matrix");
    m.row(r) = row.transpose();
  }
  return m;
}

Json system_to_json(const ObtuseSystem& s) {
  Json values = Json::array();
  for (const auto& v : s.values()) values.push_back(vector_to_json(v));
  return Json{{"dim", s.dim()}, {"values", values}, {"probabilities", s.probabilities()}};
}

SystemInput system_input_from_json(const Json& j) {
  return guarded([&] {
    SystemInput in;
    const Json& values = field(j, "values");
    if (!values.is_array()) bad("\"values\" must be an array");
    for (const auto& v : values) in.values.push_back(vector_from_json(v));
    if (j.contains("dim")) {
      const std::size_t dim = size_field(j, "dim");
      for (const auto& v : in.values) {
        if (static_cast<std::size_t>(v.size()) != dim) {
          throw Error(ErrorCode::DimensionMismatch, "value length differs from \"dim\"");
        }
      }
    }
    if (j.contains("probabilities")) {
      const Json& p = j.at("probabilities");
      if (!p.is_array()) bad("\"probabilities\" must be an array");
      for (const auto& x : p) in.probabilities.push_back(number(x, "probability"));
    }
    return in;
  });
}

ObtuseSystem system_from_json(const Json& j, double tol) {
  SystemInput in = system_input_from_json(j);
  if (in.probabilities.empty()) return ObtuseSystem::from_values(std::move(in.values), tol);
  return ObtuseSystem::from_values(std::move(in.values), in.probabilities, tol);
}

Json tensor_to_json(const Tensor3& s) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < s.dim(); ++i) {
    Json rows = Json::array();
    for (std::size_t j = 0; j < s.dim(); ++j) {
      Json row = Json::array();
      for (std::size_t k = 0; k < s.dim(); ++k) row.push_back(complex_to_json(s(i, j, k)));
      rows.push_back(row);
    }
    entries.push_back(rows);
  }
  return Json{{"dim", s.dim()},
              {"constant_coordinate", s.constant_coordinate()},
              {"entries", entries}};
}

Tensor3 tensor_from_json(const Json& j) {
  return guarded([&] {
    const std::size_t d = size_field(j, "dim");
    const bool cc = j.contains("constant_coordinate") ? j.at("constant_coordinate").get<bool>()
                                                      : false;
    const Json& e = field(j, "entries");
    Tensor3 s(d, cc);
    if (!e.is_array() || e.size() != d) bad("\"entries\" must have dim slices");
    for (std::size_t i = 0; i < d; ++i) {
      if (!e[i].is_array() || e[i].size() != d) bad("tensor slice has wrong size");
      for (std::size_t jj = 0; jj < d; ++jj) {
        if (!e[i][jj].is_array() || e[i][jj].size() != d) bad("tensor row has wrong size");
        for (std::size_t k = 0; k < d; ++k) s(i, jj, k) = complex_from_json(e[i][jj][k]);
      }
    }
    return s;
  });
}

Json family_to_json(const std::vector<ComplexVector>& vectors) {
  Json out = Json::array();
  for (const auto& v : vectors) {
    out.push_back(Json{{"v", vector_to_json(v)}, {"weight", 1.0 / v.squaredNorm()}});
  }
  return Json{{"family", out}};
}

TensorFamily tensor_family_from_json(const Json& j, double tol) {
  return guarded([&] {
    const Json& samples = field(j, "samples");
    if (!samples.is_array()) bad("\"samples\" must be an array");
    TensorFamily family;
    for (const auto& smp : samples) {
      const double h = number(field(smp, "h"), "h");
      if (smp.contains("tensor")) {
        family.push_back({h, tensor_from_json(smp.at("tensor"))});
      } else if (smp.contains("system")) {
        // step laws with tiny h carry values of size 1/sqrt(h)
        family.push_back({h, tensor_of(system_from_json(smp.at("system"), tol / std::min(1.0, h)))});
      } else {
        bad("sample needs a \"tensor\" or a \"system\"");
      }
    }
    return family;
  });
}

Json limit_spec_to_json(const LimitSpec& spec) {
  Json poisson = Json::array();
  for (const auto& p : spec.poisson) {
    poisson.push_back(Json{{"v", vector_to_json(p.v)}, {"intensity", p.intensity}});
  }
  Json brownian = Json::array();
  for (const auto& b : spec.brownian) brownian.push_back(vector_to_json(b));
  return Json{{"dim", spec.dim},
              {"M", tensor_to_json(spec.m)},
              {"Lambda", matrix_to_json(spec.lambda)},
              {"V", matrix_to_json(spec.v)},
              {"poisson", poisson},
              {"brownian", brownian}};
}

LimitSpec limit_spec_from_json(const Json& j) {
  return guarded([&] {
    LimitSpec spec;
    spec.m = tensor_from_json(field(j, "M"));
    spec.dim = j.contains("dim") ? size_field(j, "dim") : spec.m.dim();
    spec.lambda = matrix_from_json(field(j, "Lambda"));
    spec.v = matrix_from_json(field(j, "V"));
    for (const auto& p : field(j, "poisson")) {
      spec.poisson.push_back({vector_from_json(field(p, "v")),
                              number(field(p, "intensity"), "intensity")});
    }
    for (const auto& b : field(j, "brownian")) spec.brownian.push_back(vector_from_json(b));
    const auto n = static_cast<Eigen::Index>(spec.dim);
    bool ok = spec.m.dim() == spec.dim && spec.lambda.rows() == n && spec.lambda.cols() == n &&
              spec.v.rows() == n && spec.v.cols() == n;
    for (const auto& p : spec.poisson) ok = ok && p.v.size() == n;
    for (const auto& b : spec.brownian) ok = ok && b.size() == n;
    if (!ok) throw Error(ErrorCode::DimensionMismatch, "limit specification shapes disagree");
    return spec;
  });
}

Json validation_to_json(const ObtuseValidation& v) {
  Json pairs = Json::array();
  for (const auto& [ij, r] : v.pair_residuals) {
    pairs.push_back(Json{{"pair", {ij.first + 1, ij.second + 1}}, {"residual", r}});
  }
  Json out{{"valid", v.valid},
           {"dim", v.dim},
           {"tol", v.tol},
           {"probabilities", v.probabilities},
           {"pair_residuals", pairs},
           {"max_pair_residual", v.max_pair_residual()},
           {"probability_sum_residual", v.probability_sum_residual},
           {"centering_residual", v.centering_residual},
           {"identity_residual", v.identity_residual}};
  if (v.offending_pair) {
    out["offending_pair"] = {v.offending_pair->first + 1, v.offending_pair->second + 1};
  }
  return out;
}

Json symmetry_to_json(const SymmetryReport& r) {
  Json out{{"ok", r.ok()}, {"tol", r.tol}};
  if (r.sym0_checked) out["sym0"] = r.sym0;
  out["sym1"] = r.sym1;
  out["sym2"] = r.sym2;
  out["sym3"] = r.sym3;
  return out;
}

Json limit_symmetry_to_json(const LimitSymmetryReport& r) {
  return Json{{"ok", r.ok()},
              {"tol", r.tol},
              {"sym1", r.sym1},
              {"sym2", r.sym2},
              {"sym3", r.sym3},
              {"lambda_symmetry", r.lambda_symmetry},
              {"lambda_unitarity", r.lambda_unitarity},
              {"ml", r.ml},
              {"sbl", r.sbl}};
}

namespace {
Json real_matrix_to_json(const RealMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}
}  // namespace

Json brackets_to_json(const BracketEstimate& b) {
  return Json{{"increments", b.increments},
              {"total_time", b.total_time},
              {"bracket", matrix_to_json(b.bracket)},
              {"conj_bracket", matrix_to_json(b.conj_bracket)},
              {"residual", matrix_to_json(b.residual)},
              {"conj_residual", matrix_to_json(b.conj_residual)},
              {"se_re", real_matrix_to_json(b.se_re)},
              {"se_im", real_matrix_to_json(b.se_im)},
              {"conj_se_re", real_matrix_to_json(b.conj_se_re)},
              {"conj_se_im", real_matrix_to_json(b.conj_se_im)},
              {"worst_score_5se", b.worst_score()},
              {"within_5se", b.within()}};
}

Json moments_to_json(const MomentReport& r) {
  Json per = Json::array();
  for (const auto& d : r.per_time) {
    per.push_back(Json{{"t", d.t},
                       {"mean", d.mean},
                       {"covariance", d.covariance},
                       {"pseudo_covariance", d.pseudo},
                       {"fourth", d.fourth}});
  }
  return Json{{"per_time", per},
              {"max_mean", r.max_mean},
              {"max_covariance", r.max_covariance},
              {"max_pseudo_covariance", r.max_pseudo},
              {"max_fourth", r.max_fourth}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

std::string dump(const Json& j) { return j.dump(2); }

}  // namespace obtuse::io
