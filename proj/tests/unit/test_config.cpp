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

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>

#include "sbss/error.hpp"
#include "sbss/harness/config.hpp"

using namespace sbss;
using namespace sbss::harness;

namespace {

std::optional<ErrorCode> code_of(const std::string& text) {
  try {
    parse_config(text).validate();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("defaults validate") {
  const ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.sources == std::vector<int>{2});
  CHECK(cfg.mics == 8);
  CHECK(cfg.window_len == 2048);
  CHECK(cfg.overlap == 0.75);
  CHECK(cfg.alpha == 0.12);
  CHECK(cfg.beta == 0.95);
}

TEST_CASE("parsing keys, comments, lists and whitespace") {
  const auto cfg = parse_config(
      "# counting corpus\n"
      "sources = 1, 2,3\n"
      "  alpha=0.1   # inline comment\n"
      "\n"
      "trials = 60\r\n"
      "seed = 18446744073709551615\n"
      "known_count = no\n"
      "baselines = false\n");
  CHECK(cfg.sources == std::vector<int>{1, 2, 3});
  CHECK(cfg.alpha == 0.1);
  CHECK(cfg.trials == 60);
  CHECK(cfg.seed == 18446744073709551615ULL);
  CHECK_FALSE(cfg.known_count);
  CHECK_FALSE(cfg.baselines);
  CHECK(cfg.mics == 8);  // untouched keys keep their defaults
}

TEST_CASE("parse errors report the line") {
  for (const char* text : {"alpha = 0.1\nnot_a_key = 3\n", "alpha = 0.1\nalpha 3\n", "alpha = 0.1\ntrials = 2.5\n",
                           "alpha = 0.1\nknown_count = maybe\n", "alpha = 0.1\nsources = 1,,2\n"}) {
    try {
      parse_config(text);
      FAIL("expected a config error for: " << text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kConfig);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
}

TEST_CASE("validation rejects unusable values") {
  CHECK(code_of("alpha = 1.0") == ErrorCode::kConfig);
  CHECK(code_of("alpha = 0") == ErrorCode::kConfig);
  CHECK(code_of("beta = 1.2") == ErrorCode::kConfig);
  CHECK(code_of("beta_retry = 0") == ErrorCode::kConfig);
  CHECK(code_of("gamma = 1") == ErrorCode::kConfig);
  CHECK(code_of("trials = 0") == ErrorCode::kConfig);
  CHECK(code_of("threads = 0") == ErrorCode::kConfig);
  CHECK(code_of("smoothing_frames = 3") == ErrorCode::kConfig);
  CHECK(code_of("sources = 9") == ErrorCode::kConfig);
  CHECK(code_of("ref_mic = 8") == ErrorCode::kConfig);
  CHECK(code_of("alpha_min = 0.2\nalpha_max = 0.1") == ErrorCode::kConfig);
  CHECK(code_of("overlap = 0.3") == ErrorCode::kConfig);  // hop is not an integer
  CHECK(code_of("window_len = 1000\noverlap = 0.75") == std::nullopt);
  CHECK(code_of("gamma = 0.9") == std::nullopt);
}

TEST_CASE("text form round-trips") {
  ExperimentConfig cfg;
  cfg.sources = {1, 3};
  cfg.alpha = 0.1 + 0.02;  // not exactly 0.12
  cfg.decay_s = 1.0 / 3.0;
  cfg.seed = 987654321987ULL;
  cfg.baselines = false;
  const auto text = to_text(cfg);
  const auto back = parse_config(text);
  CHECK(back.sources == cfg.sources);
  CHECK(back.alpha == cfg.alpha);
  CHECK(back.decay_s == cfg.decay_s);
  CHECK(back.seed == cfg.seed);
  CHECK(back.baselines == cfg.baselines);
  CHECK(to_text(back) == text);
}

TEST_CASE("alpha sweep includes both endpoints") {
  const ExperimentConfig cfg;
  const auto a = cfg.alpha_sweep();
  REQUIRE(a.size() == 8);
  CHECK(a.front() == doctest::Approx(0.09));
  CHECK(a.back() == doctest::Approx(0.16));
  ExperimentConfig one;
  one.alpha_min = one.alpha_max = 0.12;
  CHECK(one.alpha_sweep().size() == 1);
}

TEST_CASE("pipeline settings follow the config") {
  ExperimentConfig cfg;
  cfg.counting_lo_hz = 400.0;
  cfg.smoothing_frames = 4;
  cfg.ref_mic = 3;
  cfg.beta = 0.9;
  const auto p = cfg.pipeline();
  CHECK(p.counting.band_lo_hz == 400.0);
  CHECK(p.counting.band_hi_hz == 1500.0);
  CHECK(p.separation.band_hi_hz == 4500.0);
  CHECK(p.counting.smoothing_frames == 4);
  CHECK(p.separation.ref_mic == 3);
  CHECK(p.beta == 0.9);
  CHECK(p.stft.window_len() == 2048);
  CHECK_FALSE(p.fixed_sources.has_value());
}

TEST_CASE("loading from a file") {
  const std::string path = "test_config_tmp.conf";
  {
    std::ofstream f(path);
    f << "trials = 7\nmics = 6\n";
  }
  const auto cfg = load_config(path);
  CHECK(cfg.trials == 7);
  CHECK(cfg.mics == 6);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config("no/such/file.conf"), Error);
}
