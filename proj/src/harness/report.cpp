// Copyright 2026 The sbss Authors
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

#include "sbss/harness/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "sbss/error.hpp"

namespace sbss::harness {
namespace {

using nlohmann::json;

json summary_json(const Summary& s) {
  return json{{"count", s.count}, {"mean", s.mean}, {"std_error", s.std_error}};
}

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json method_json(const MethodScore& m) {
  if (!m.ok) return json{{"ok", false}, {"error", m.error}};
  return json{{"ok", true}, {"sir_db", m.sir_db}, {"sdr_db", m.sdr_db}};
}

std::string optional_number(bool ok, double x) { return ok ? format_number(x) : std::string(); }

// Errors may contain commas; quote them per RFC 4180.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

json counting_json(const CountingReport& r, const ExperimentConfig& cfg) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j{{"trial", row.trial}, {"sources", row.sources}};
    if (row.error.empty()) {
      j["estimates"] = row.estimates;
      j["leading_ratios"] = vector_json(row.leading_ratios);
    } else {
      j["error"] = row.error;
    }
    rows.push_back(std::move(j));
  }
  return json{{"schema_version", kSchemaVersion},
              {"kind", "counting"},
              {"config", to_text(cfg)},
              {"trials", r.trials},
              {"failures", r.failures},
              {"alphas", r.alphas},
              {"accuracy", r.accuracy},
              {"min_accuracy", r.min_accuracy()},
              {"max_accuracy", r.max_accuracy()},
              {"rows", rows}};
}

json separation_json(const SeparationReport& r, const ExperimentConfig& cfg) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j{{"trial", row.trial},
           {"sources", row.sources},
           {"estimated", row.estimated_count},
           {"input_sir_db", row.input_sir_db},
           {"beta_retried", row.beta_retried},
           {"proposed", method_json(row.proposed)}};
    if (r.baselines) {
      j["ideal"] = method_json(row.ideal);
      j["semi_ideal"] = method_json(row.semi_ideal);
    }
    rows.push_back(std::move(j));
  }
  json out{{"schema_version", kSchemaVersion},
           {"kind", "separation"},
           {"config", to_text(cfg)},
           {"trials", r.trials},
           {"failures", r.failures},
           {"input_sir_db", summary_json(r.input_sir)},
           {"proposed", {{"sir_db", summary_json(r.proposed_sir)}, {"sdr_db", summary_json(r.proposed_sdr)}}},
           {"rows", rows}};
  if (r.baselines) {
    out["ideal"] = {{"sir_db", summary_json(r.ideal_sir)}, {"sdr_db", summary_json(r.ideal_sdr)}};
    out["semi_ideal"] = {{"sir_db", summary_json(r.semi_ideal_sir)},
                         {"sdr_db", summary_json(r.semi_ideal_sdr)}};
  }
  return out;
}

json pipeline_json(const SeparationResult& r) {
  json sets = json::array();
  for (const auto& s : r.frame_sets) sets.push_back(s);
  return json{{"schema_version", kSchemaVersion},
              {"kind", "separate"},
              {"estimated_count", r.estimated_count},
              {"count_saturated", r.count_saturated},
              {"counting_spectrum", vector_json(r.counting_spectrum)},
              {"separation_spectrum", vector_json(r.separation_spectrum)},
              {"kept_frames", r.kept_frames.size()},
              {"vertex_frames", r.vertices.frame_indices},
              {"clip_mass", vector_json(r.probabilities.clip_mass)},
              {"beta", r.dominated.beta},
              {"beta_retried", r.beta_retried},
              {"frame_sets", sets},
              {"rtf_guarded_bins", r.rtf.guarded},
              {"ill_conditioned_bins", r.ill_conditioned_bins},
              {"log", r.log}};
}

json validation_json(const ValidationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"detail", c.detail}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"kind", "validate"},
              {"all_passed", r.all_passed()},
              {"checks", checks}};
}

std::string spectrum_csv(const Eigen::VectorXd& eigenvalues) {
  std::string out = "index,eigenvalue,ratio\n";
  const double top = eigenvalues.size() > 0 ? eigenvalues(0) : 0.0;
  for (Index k = 0; k < eigenvalues.size(); ++k) {
    out += std::to_string(k) + "," + format_number(eigenvalues(k)) + "," +
           format_number(top != 0.0 ? eigenvalues(k) / top : 0.0) + "\n";
  }
  return out;
}

std::string matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& names) {
  if (static_cast<Index>(names.size()) != m.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "one column name per matrix column required");
  }
  std::string out = "row";
  for (const auto& n : names) out += "," + n;
  out += "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    out += std::to_string(i);
    for (Index j = 0; j < m.cols(); ++j) out += "," + format_number(m(i, j));
    out += "\n";
  }
  return out;
}

std::string counting_csv(const CountingReport& r) {
  std::string out = "trial,sources,error";
  for (double a : r.alphas) out += ",alpha=" + format_number(a);
  out += "\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.trial) + "," + std::to_string(row.sources) + "," + csv_field(row.error);
    for (std::size_t a = 0; a < r.alphas.size(); ++a) {
      out += ",";
      if (row.error.empty()) out += std::to_string(row.estimates[a]);
    }
    out += "\n";
  }
  return out;
}

std::string separation_csv(const SeparationReport& r) {
  std::string out =
      "trial,sources,estimated,input_sir_db,proposed_sir_db,proposed_sdr_db,ideal_sir_db,"
      "ideal_sdr_db,semi_ideal_sir_db,semi_ideal_sdr_db,beta_retried,error\n";
  for (const auto& row : r.rows) {
    std::string error = row.proposed.error;
    for (const auto* m : {&row.ideal, &row.semi_ideal}) {
      if (!m->error.empty()) error += (error.empty() ? "" : "; ") + m->error;
    }
    out += std::to_string(row.trial) + "," + std::to_string(row.sources) + "," +
           std::to_string(row.estimated_count) + "," + format_number(row.input_sir_db) + "," +
           optional_number(row.proposed.ok, row.proposed.sir_db) + "," +
           optional_number(row.proposed.ok, row.proposed.sdr_db) + "," +
           optional_number(row.ideal.ok, row.ideal.sir_db) + "," +
           optional_number(row.ideal.ok, row.ideal.sdr_db) + "," +
           optional_number(row.semi_ideal.ok, row.semi_ideal.sir_db) + "," +
           optional_number(row.semi_ideal.ok, row.semi_ideal.sdr_db) + "," +
           (row.beta_retried ? "1" : "0") + "," + csv_field(error) + "\n";
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error(ErrorCode::kIo, "write to " + path + " failed");
}

}  // namespace sbss::harness
