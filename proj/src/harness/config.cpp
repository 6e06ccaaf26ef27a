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

#include "sbss/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "sbss/error.hpp"

namespace sbss::harness {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& v) {
  T out{};
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument(v);
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument(v);
}

std::vector<int> parse_int_list(const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<int>(trim(item)));
  if (out.empty()) throw std::invalid_argument(v);
  return out;
}

std::string format_double(double x) {
  // Shortest representation that parses back to the same value.
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;
using Getter = std::function<std::string(const ExperimentConfig&)>;

struct Field {
  Setter set;
  Getter get;
};

template <typename T>
Field number_field(T ExperimentConfig::*member) {
  return {[member](ExperimentConfig& c, const std::string& v) { c.*member = parse_number<T>(v); },
          [member](const ExperimentConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

Field bool_field(bool ExperimentConfig::*member) {
  return {[member](ExperimentConfig& c, const std::string& v) { c.*member = parse_bool(v); },
          [member](const ExperimentConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

// Ordered so that to_text output is stable.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"sources",
       {[](ExperimentConfig& c, const std::string& v) { c.sources = parse_int_list(v); },
        [](const ExperimentConfig& c) {
          std::string s;
          for (std::size_t i = 0; i < c.sources.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(c.sources[i]);
          }
          return s;
        }}},
      {"mics", number_field(&ExperimentConfig::mics)},
      {"mic_spacing_m", number_field(&ExperimentConfig::mic_spacing_m)},
      {"sample_rate", number_field(&ExperimentConfig::sample_rate)},
      {"duration_s", number_field(&ExperimentConfig::duration_s)},
      {"decay_s", number_field(&ExperimentConfig::decay_s)},
      {"drr_db", number_field(&ExperimentConfig::drr_db)},
      {"min_separation_deg", number_field(&ExperimentConfig::min_separation_deg)},
      {"window_len", number_field(&ExperimentConfig::window_len)},
      {"overlap", number_field(&ExperimentConfig::overlap)},
      {"smoothing_frames", number_field(&ExperimentConfig::smoothing_frames)},
      {"ref_mic", number_field(&ExperimentConfig::ref_mic)},
      {"energy_gate_db", number_field(&ExperimentConfig::energy_gate_db)},
      {"counting_lo_hz", number_field(&ExperimentConfig::counting_lo_hz)},
      {"counting_hi_hz", number_field(&ExperimentConfig::counting_hi_hz)},
      {"separation_lo_hz", number_field(&ExperimentConfig::separation_lo_hz)},
      {"separation_hi_hz", number_field(&ExperimentConfig::separation_hi_hz)},
      {"alpha", number_field(&ExperimentConfig::alpha)},
      {"alpha_min", number_field(&ExperimentConfig::alpha_min)},
      {"alpha_max", number_field(&ExperimentConfig::alpha_max)},
      {"alpha_step", number_field(&ExperimentConfig::alpha_step)},
      {"beta", number_field(&ExperimentConfig::beta)},
      {"beta_retry", number_field(&ExperimentConfig::beta_retry)},
      {"gamma", number_field(&ExperimentConfig::gamma)},
      {"trials", number_field(&ExperimentConfig::trials)},
      {"seed", number_field(&ExperimentConfig::seed)},
      {"threads", number_field(&ExperimentConfig::threads)},
      {"known_count", bool_field(&ExperimentConfig::known_count)},
      {"baselines", bool_field(&ExperimentConfig::baselines)},
  };
  return table;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kConfig, what);
}

bool open_unit(double x) { return x > 0.0 && x < 1.0; }

}  // namespace

std::vector<double> ExperimentConfig::alpha_sweep() const {
  std::vector<double> out;
  // Index-based so rounding never drops or duplicates the endpoint.
  const int steps = static_cast<int>(std::floor((alpha_max - alpha_min) / alpha_step + 1e-9));
  for (int i = 0; i <= steps; ++i) out.push_back(alpha_min + i * alpha_step);
  return out;
}

StftConfig ExperimentConfig::stft() const {
  return StftConfig(window_len, overlap, WindowKind::kHann, sample_rate);
}

PipelineConfig ExperimentConfig::pipeline() const {
  PipelineConfig p;
  p.stft = stft();
  p.counting = FeatureConfig{counting_lo_hz, counting_hi_hz, smoothing_frames, ref_mic, energy_gate_db};
  p.separation =
      FeatureConfig{separation_lo_hz, separation_hi_hz, smoothing_frames, ref_mic, energy_gate_db};
  p.alpha = alpha;
  p.beta = beta;
  p.beta_retry = beta_retry;
  return p;
}

void ExperimentConfig::validate() const {
  require(!sources.empty(), "sources must list at least one speaker count");
  for (int j : sources) require(j >= 1 && j <= mics, "every speaker count must lie in [1, mics]");
  require(mics >= 2, "mics must be >= 2");
  require(mic_spacing_m > 0.0 && sample_rate > 0.0 && duration_s > 0.0, "geometry and duration must be positive");
  require(decay_s > 0.0, "decay_s must be positive");
  require(open_unit(overlap) || overlap == 0.0, "overlap must lie in [0,1)");
  require(smoothing_frames >= 0 && smoothing_frames % 2 == 0, "smoothing_frames must be even and >= 0");
  require(ref_mic >= 0 && ref_mic < mics, "ref_mic out of range");
  require(energy_gate_db > 0.0, "energy_gate_db must be positive");
  require(open_unit(alpha), "alpha must lie in (0,1)");
  require(open_unit(alpha_min) && open_unit(alpha_max) && alpha_min <= alpha_max,
          "alpha sweep must lie in (0,1) with alpha_min <= alpha_max");
  require(alpha_step > 0.0, "alpha_step must be positive");
  require(open_unit(beta), "beta must lie in (0,1)");
  require(open_unit(beta_retry), "beta_retry must lie in (0,1)");
  require(gamma == 0.0 || open_unit(gamma), "gamma must be 0 (automatic) or lie in (0,1)");
  require(trials >= 1, "trials must be >= 1");
  require(threads >= 1, "threads must be >= 1");
  try {
    (void)stft();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, std::string("stft: ") + e.what());
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::map<std::string, const Field*> index;
  for (const auto& [name, field] : fields()) index[name] = &field;

  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(number) + ": ";
    if (eq == std::string::npos) throw Error(ErrorCode::kConfig, where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = index.find(key);
    if (it == index.end()) throw Error(ErrorCode::kConfig, where + "unknown key '" + key + "'");
    try {
      it->second->set(cfg, value);
    } catch (const std::invalid_argument&) {
      throw Error(ErrorCode::kConfig, where + "bad value '" + value + "' for " + key);
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kIo, "cannot open config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [name, field] : fields()) out += name + " = " + field.get(cfg) + "\n";
  return out;
}

}  // namespace sbss::harness
