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

#include <string>

#include "sbss/error.hpp"
#include "sbss/harness/metrics.hpp"
#include "sbss/harness/room.hpp"
#include "sbss/harness/speech_proxy.hpp"
#include "sbss/separation.hpp"
#include "test_support.hpp"

using namespace sbss;

namespace {

const StftConfig kSmall(64, 0.75);

// Two sources with multiplicative transfer functions: frames [0, 5) carry
// only source 0, [5, 10) only source 1, [10, 20) both.
struct TwoSourceScene {
  Eigen::MatrixXcd atf0, atf1;  // M x K
  Eigen::MatrixXcd s0, s1;      // L x K
  Spectrogram mix;
  std::vector<Spectrogram> images;
};

TwoSourceScene two_source_scene(Index mics) {
  TwoSourceScene sc;
  const Index bins = kSmall.bins();
  sc.atf0 = test::complex_gaussian(mics, bins, 21);
  sc.atf1 = test::complex_gaussian(mics, bins, 22);
  sc.s0 = test::complex_gaussian(20, bins, 23);
  sc.s1 = test::complex_gaussian(20, bins, 24);
  sc.s0.middleRows(5, 5).setZero();
  sc.s1.topRows(5).setZero();
  sc.mix = Spectrogram{{}, kSmall, 0};
  sc.images.assign(2, Spectrogram{{}, kSmall, 0});
  for (Index m = 0; m < mics; ++m) {
    Eigen::MatrixXcd i0 = sc.s0.array().rowwise() * sc.atf0.row(m).array();
    Eigen::MatrixXcd i1 = sc.s1.array().rowwise() * sc.atf1.row(m).array();
    sc.mix.channels.push_back(i0 + i1);
    sc.images[0].channels.push_back(std::move(i0));
    sc.images[1].channels.push_back(std::move(i1));
  }
  return sc;
}

std::vector<Index> range(Index lo, Index hi) {
  std::vector<Index> v;
  for (Index l = lo; l < hi; ++l) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("RTFs from single-source frames are exact") {
  const auto sc = two_source_scene(4);
  for (int ref : {0, 2}) {
    const auto est = estimate_rtf(sc.mix, {range(0, 5), range(5, 10)}, ref);
    REQUIRE(est.speakers() == 2);
    CHECK(est.mics() == 4);
    CHECK(est.bins() == kSmall.bins());
    CHECK(est.guarded == 0);
    for (Index m = 0; m < 4; ++m) {
      const Eigen::RowVectorXcd e0 = sc.atf0.row(m).array() / sc.atf0.row(ref).array();
      const Eigen::RowVectorXcd e1 = sc.atf1.row(m).array() / sc.atf1.row(ref).array();
      CHECK((est.h[0].row(m) - e0).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + e0.cwiseAbs().maxCoeff()));
      CHECK((est.h[1].row(m) - e1).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + e1.cwiseAbs().maxCoeff()));
    }
    CHECK((est.h[0].row(ref).array() - 1.0).abs().maxCoeff() == 0.0);
  }
}

TEST_CASE("RTF estimation rejects empty and out-of-range frame sets") {
  const auto sc = two_source_scene(3);
  try {
    estimate_rtf(sc.mix, {range(0, 5), {}});
    FAIL("expected an empty frame set error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyFrameSet);
    CHECK(std::string(e.what()).find("speaker 1") != std::string::npos);
  }
  CHECK_THROWS_AS(estimate_rtf(sc.mix, {{0, 20}}), Error);
  CHECK_THROWS_AS(estimate_rtf(sc.mix, {range(0, 5)}, 3), Error);
}

TEST_CASE("unmixing weights are distortionless for every speaker") {
  const auto sc = two_source_scene(5);
  const auto est = estimate_rtf(sc.mix, {range(0, 5), range(5, 10)});
  const auto op = build_unmixer(est);
  REQUIRE(op.bins() == kSmall.bins());
  CHECK(op.speakers() == 2);
  CHECK(op.ill_conditioned_count() == 0);
  Eigen::MatrixXcd c(5, 2);
  for (Index k = 0; k < op.bins(); ++k) {
    c.col(0) = est.h[0].col(k);
    c.col(1) = est.h[1].col(k);
    const Eigen::MatrixXcd bhc = op.b[static_cast<std::size_t>(k)].adjoint() * c;
    CHECK((bhc - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("exact RTFs recover each source image at the reference") {
  const auto sc = two_source_scene(4);
  const auto op = build_unmixer(estimate_rtf(sc.mix, {range(0, 5), range(5, 10)}));
  const auto z = unmix_spectra(sc.mix, op);
  REQUIRE(z.num_channels() == 2);
  for (std::size_t j = 0; j < 2; ++j) {
    const Eigen::MatrixXcd& want = sc.images[j].channels[0];
    CHECK((z.channels[j] - want).cwiseAbs().maxCoeff() <= 1e-8 * want.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("collinear RTFs are flagged and still give finite weights") {
  RtfEstimate est;
  const Eigen::MatrixXcd h = test::complex_gaussian(3, 9, 31);
  est.h = {h, h};
  est.h[0].row(0).setOnes();
  est.h[1].row(0).setOnes();
  est.h[1].col(4) = est.h[0].col(4);
  est.h[1].col(6) *= 2.0;
  est.h[1](0, 6) = 1.0;
  const auto op = build_unmixer(est);
  CHECK(op.ill_conditioned[4]);
  for (const auto& b : op.b) CHECK(b.allFinite());
}

TEST_CASE("unmixer shape errors") {
  RtfEstimate est;
  est.h.assign(3, Eigen::MatrixXcd::Ones(2, 5));
  try {
    build_unmixer(est);
    FAIL("expected underdetermined");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnderdetermined);
  }
  CHECK_THROWS_AS(build_unmixer(RtfEstimate{}), Error);

  const auto sc = two_source_scene(3);
  const auto op = build_unmixer(estimate_rtf(sc.mix, {range(0, 5), range(5, 10)}));
  Spectrogram wrong_mics = sc.mix;
  wrong_mics.channels.pop_back();
  CHECK_THROWS_AS(unmix_spectra(wrong_mics, op), Error);
  UnmixingOperator short_op = op;
  short_op.b.pop_back();
  CHECK_THROWS_AS(unmix_spectra(sc.mix, short_op), Error);
}

TEST_CASE("pipeline errors name their stage") {
  PipelineConfig cfg;
  cfg.stft = kSmall;
  cfg.counting = FeatureConfig{0.0, 8000.0};
  cfg.separation = FeatureConfig{0.0, 8000.0};
  const Spectrogram one{{test::complex_gaussian(20, kSmall.bins(), 41)}, kSmall, 0};
  try {
    run_pipeline(one, cfg);
    FAIL("expected an input error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("[input]", 0) == 0);
  }
  const auto sc = two_source_scene(3);
  cfg.alpha = 1.5;
  try {
    run_pipeline(sc.mix, cfg);
    FAIL("expected a counting error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("[count]", 0) == 0);
  }
  cfg.alpha = 0.12;
  cfg.fixed_sources = 25;
  try {
    run_pipeline(sc.mix, cfg);
    FAIL("expected an embedding error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("[embed]", 0) == 0);
  }
}

TEST_CASE("pipeline separates a simulated two-speaker recording") {
  harness::RoomGeometry g;
  g.mics = 6;
  g.angles_deg = {-30.0, 45.0};
  g.distances_m = {1.0, 2.0};
  const auto room = harness::make_room(g, 7);
  const std::vector<Signal> clean = {harness::speech_like(6.0, 11), harness::speech_like(6.0, 12)};
  const auto mix = harness::simulate_mixture(room, clean);

  PipelineConfig cfg;
  const auto res = run_pipeline(mix.mixture, cfg);
  CHECK(res.estimated_count == 2);
  CHECK_FALSE(res.count_saturated);
  REQUIRE(res.separated.size() == 2);
  CHECK(res.separated[0].size() == mix.mixture[0].size());
  CHECK(res.frame_sets.size() == 2);
  for (const auto& set : res.frame_sets) CHECK_FALSE(set.empty());

  MultiSignal refs = {mix.images[0][0], mix.images[1][0]};
  const auto before = harness::input_sir_db(refs);
  const auto after = harness::sir_sdr(res.separated, refs);
  const double gain = after.mean_sir() - 0.5 * (before[0] + before[1]);
  MESSAGE("SIR improvement " << gain << " dB");
  CHECK(gain > 10.0);

  // Same input, same output.
  const auto again = run_pipeline(mix.mixture, cfg);
  CHECK(again.separated == res.separated);
}
