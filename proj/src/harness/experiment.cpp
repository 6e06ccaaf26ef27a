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

#include "sbss/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "sbss/error.hpp"
#include "sbss/harness/metrics.hpp"
#include "sbss/harness/oracle.hpp"
#include "sbss/harness/speech_proxy.hpp"

namespace sbss::harness {
namespace {

// Stream ids under a trial seed.
constexpr std::uint64_t kPositionStream = 1;
constexpr std::uint64_t kRoomStream = 2;
constexpr std::uint64_t kSpeechStream = 100;

constexpr Index kLeadingRatios = 6;

// Runs fn(i) for i in [0, n). Each index writes only its own slot, so the
// result does not depend on the thread count.
template <typename Fn>
void parallel_for(int n, int threads, Fn fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  for (int t = 0; t < std::min(threads, n); ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Library errors already lead with their code name.
std::string describe(const std::exception& e) { return e.what(); }

std::vector<Signal> reference_images(const Mixture& mix, int ref_mic) {
  std::vector<Signal> refs;
  for (const auto& img : mix.images) refs.push_back(img[static_cast<std::size_t>(ref_mic)]);
  return refs;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

MethodScore score(const MultiSignal& estimates, const std::vector<Signal>& refs) {
  MethodScore s;
  const MetricsReport m = sir_sdr(estimates, refs);
  s.ok = true;
  s.sir_db = m.mean_sir();
  s.sdr_db = m.mean_sdr();
  return s;
}

template <typename Fn>
MethodScore guarded_score(Fn fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    MethodScore s;
    s.error = describe(e);
    return s;
  }
}

}  // namespace

Scenario make_scenario(const ExperimentConfig& cfg, int trial) {
  Scenario sc;
  sc.trial = trial;
  sc.sources = cfg.sources[static_cast<std::size_t>(trial) % cfg.sources.size()];
  const Seed seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));

  RoomGeometry g;
  g.mics = cfg.mics;
  g.mic_spacing_m = cfg.mic_spacing_m;
  g.sample_rate = cfg.sample_rate;
  g.decay_s = cfg.decay_s;
  g.drr_db = cfg.drr_db;
  draw_positions(sc.sources, derive_seed(seed, kPositionStream), g.angles_deg, g.distances_m,
                 cfg.min_separation_deg);
  sc.room = make_room(g, derive_seed(seed, kRoomStream));

  SpeechProxyParams speech;
  speech.sample_rate = cfg.sample_rate;
  for (int j = 0; j < sc.sources; ++j) {
    sc.clean.push_back(
        speech_like(cfg.duration_s, derive_seed(seed, kSpeechStream + static_cast<std::uint64_t>(j)), speech));
  }
  sc.mix = simulate_mixture(sc.room, sc.clean);
  return sc;
}

double CountingReport::min_accuracy() const {
  return accuracy.empty() ? 0.0 : *std::min_element(accuracy.begin(), accuracy.end());
}

double CountingReport::max_accuracy() const {
  return accuracy.empty() ? 0.0 : *std::max_element(accuracy.begin(), accuracy.end());
}

CountingReport run_counting(const ExperimentConfig& cfg) {
  cfg.validate();
  CountingReport report;
  report.alphas = cfg.alpha_sweep();
  report.trials = cfg.trials;
  report.rows.resize(static_cast<std::size_t>(cfg.trials));
  const PipelineConfig pipe = cfg.pipeline();

  parallel_for(cfg.trials, cfg.threads, [&](int t) {
    CountingTrial& row = report.rows[static_cast<std::size_t>(t)];
    row.trial = t;
    try {
      const Scenario sc = make_scenario(cfg, t);
      row.sources = sc.sources;
      const Spectrogram s = stft(sc.mix.mixture, pipe.stft);
      const auto feats = extract_features(s, pipe.counting);
      const auto corr = build_correlation(feats.features);
      const Index shown = std::min(kLeadingRatios, corr.size());
      row.leading_ratios = corr.eigenvalues().head(shown) / corr.eigenvalues()(0);
      for (double a : report.alphas) row.estimates.push_back(static_cast<int>(count_sources(corr, a).count));
    } catch (const std::exception& e) {
      row.sources = cfg.sources[static_cast<std::size_t>(t) % cfg.sources.size()];
      row.error = describe(e);
      row.estimates.clear();
    }
  });

  report.accuracy.assign(report.alphas.size(), 0.0);
  for (const auto& row : report.rows) {
    if (!row.error.empty()) {
      ++report.failures;
      continue;
    }
    for (std::size_t a = 0; a < report.alphas.size(); ++a) {
      if (row.estimates[a] == row.sources) report.accuracy[a] += 1.0;
    }
  }
  for (double& acc : report.accuracy) acc /= cfg.trials;
  return report;
}

bool SeparationTrial::complete(bool baselines) const {
  return proposed.ok && (!baselines || (ideal.ok && semi_ideal.ok));
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  s.mean = mean_of(values);
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std_error = std::sqrt(ss / static_cast<double>(values.size() - 1)) /
                  std::sqrt(static_cast<double>(values.size()));
  }
  return s;
}

SeparationReport run_separation(const ExperimentConfig& cfg) {
  cfg.validate();
  SeparationReport report;
  report.trials = cfg.trials;
  report.baselines = cfg.baselines;
  report.rows.resize(static_cast<std::size_t>(cfg.trials));

  parallel_for(cfg.trials, cfg.threads, [&](int t) {
    SeparationTrial& row = report.rows[static_cast<std::size_t>(t)];
    row.trial = t;
    row.sources = cfg.sources[static_cast<std::size_t>(t) % cfg.sources.size()];
    Scenario sc;
    try {
      sc = make_scenario(cfg, t);
    } catch (const std::exception& e) {
      row.proposed.error = describe(e);
      return;
    }
    const std::vector<Signal> refs = reference_images(sc.mix, cfg.ref_mic);
    row.input_sir_db = mean_of(input_sir_db(refs));

    PipelineConfig pipe = cfg.pipeline();
    if (cfg.known_count) pipe.fixed_sources = sc.sources;
    const Spectrogram s = stft(sc.mix.mixture, pipe.stft);

    row.proposed = guarded_score([&] {
      const SeparationResult res = run_pipeline(s, pipe);
      row.estimated_count = res.estimated_count;
      row.beta_retried = res.beta_retried;
      if (res.estimated_count != sc.sources) {
        throw Error(ErrorCode::kShapeMismatch, "estimated " + std::to_string(res.estimated_count) +
                                                   " speakers, truth is " + std::to_string(sc.sources));
      }
      return score(res.separated, refs);
    });
    if (!cfg.baselines) return;

    std::vector<Spectrogram> images;
    for (const auto& img : sc.mix.images) images.push_back(stft(img, pipe.stft));
    row.ideal = guarded_score([&] {
      return score(separate(s, build_unmixer(ideal_rtf(images, cfg.ref_mic))), refs);
    });
    row.semi_ideal = guarded_score([&] {
      const double gamma = cfg.gamma > 0.0 ? cfg.gamma : default_gamma(sc.sources);
      const OracleSelection sel = semi_ideal_sets(images, gamma, cfg.ref_mic);
      RtfEstimate h = estimate_rtf(s, sel.sets, cfg.ref_mic);
      h.source = RtfSource::kSemiIdeal;
      return score(separate(s, build_unmixer(h)), refs);
    });
  });

  std::vector<double> in, psir, psdr, isir, isdr, ssir, ssdr;
  for (const auto& row : report.rows) {
    if (!row.complete(cfg.baselines)) {
      ++report.failures;
      continue;
    }
    in.push_back(row.input_sir_db);
    psir.push_back(row.proposed.sir_db);
    psdr.push_back(row.proposed.sdr_db);
    if (cfg.baselines) {
      isir.push_back(row.ideal.sir_db);
      isdr.push_back(row.ideal.sdr_db);
      ssir.push_back(row.semi_ideal.sir_db);
      ssdr.push_back(row.semi_ideal.sdr_db);
    }
  }
  report.input_sir = summarize(in);
  report.proposed_sir = summarize(psir);
  report.proposed_sdr = summarize(psdr);
  report.ideal_sir = summarize(isir);
  report.ideal_sdr = summarize(isdr);
  report.semi_ideal_sir = summarize(ssir);
  report.semi_ideal_sdr = summarize(ssdr);
  return report;
}

}  // namespace sbss::harness
