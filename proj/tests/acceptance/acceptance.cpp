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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Every threshold below is the
// contract value; nothing is relaxed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "sbss/convex_geometry.hpp"
#include "sbss/error.hpp"
#include "sbss/harness/config.hpp"
#include "sbss/harness/experiment.hpp"
#include "sbss/harness/report.hpp"
#include "sbss/rng.hpp"
#include "sbss/separation.hpp"
#include "sbss/spectral_simplex.hpp"
#include "sbss/stft.hpp"
#include "sbss/synth_mixture.hpp"

using namespace sbss;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = false;
  std::string detail;
};

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

// Smallest mean absolute error between the columns of `a` and a column
// permutation of `b`.
double permuted_mae(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  std::vector<int> perm(static_cast<std::size_t>(a.cols()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double err = 0.0;
    for (Index j = 0; j < a.cols(); ++j) err += (a.col(j) - b.col(perm[static_cast<std::size_t>(j)])).cwiseAbs().sum();
    best = std::min(best, err / static_cast<double>(a.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double permuted_max_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  std::vector<int> perm(static_cast<std::size_t>(a.cols()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double err = 0.0;
    for (Index j = 0; j < a.cols(); ++j) {
      err = std::max(err, (a.col(j) - b.col(perm[static_cast<std::size_t>(j)])).cwiseAbs().maxCoeff());
    }
    best = std::min(best, err);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Eigen::MatrixXd gaussian(Index rows, Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

Eigen::MatrixXcd complex_gaussian(Index rows, Index cols, Rng& rng) {
  Eigen::MatrixXcd m(rows, cols);
  m.real() = gaussian(rows, cols, rng);
  m.imag() = gaussian(rows, cols, rng);
  return m;
}

// ---------------------------------------------------------------------------
// 1 and 2 share the synthetic regime: J in {2,3,4}, D = 1000, L = 500.

struct SyntheticRun {
  int trials = 0;
  int counted = 0;
  int decay_ok = 0;
  double mae_sum = 0.0;
  double mae_max = 0.0;
};

std::vector<SyntheticRun> synthetic_runs;
double synthetic_seconds = 0.0;

void run_synthetic_regime() {
  const auto start = Clock::now();
  const Seed root = 0x51a9;
  for (Index j = 2; j <= 4; ++j) {
    SyntheticRun run;
    for (int t = 0; t < 100; ++t) {
      const Seed seed = derive_seed(derive_seed(root, static_cast<std::uint64_t>(j)), static_cast<std::uint64_t>(t));
      const auto p = generate_probabilities(500, j, derive_seed(seed, 0));
      const auto h = generate_hidden_sources(j, 1000, derive_seed(seed, 1));
      const auto a = generate_observations(h, p, derive_seed(seed, 2)).first;
      const auto w = build_correlation(a);
      const Eigen::VectorXd& ev = w.eigenvalues();

      ++run.trials;
      if (count_sources(w, 0.12).count == j) ++run.counted;
      if (ev(j) / ev(0) <= 0.05 && ev(j - 1) / ev(0) >= 0.15) ++run.decay_ok;

      const auto e = embed(w, j);
      const auto r = recover_probabilities(e, find_vertices(e));
      const double mae = permuted_mae(r.phat, p.values());
      run.mae_sum += mae;
      run.mae_max = std::max(run.mae_max, mae);
    }
    synthetic_runs.push_back(run);
  }
  synthetic_seconds = std::chrono::duration<double>(Clock::now() - start).count();
}

Outcome criterion_1() {
  run_synthetic_regime();
  Outcome out{true, ""};
  for (std::size_t i = 0; i < synthetic_runs.size(); ++i) {
    const auto& r = synthetic_runs[i];
    const double rate = static_cast<double>(r.counted) / r.trials;
    const double mae = r.mae_sum / r.trials;
    out.passed = out.passed && rate >= 0.99 && mae <= 0.05;
    out.detail += "J=" + std::to_string(i + 2) + ": count " + fmt(100.0 * rate) + "%, MAE " + fmt(mae, 3) +
                  " (worst " + fmt(r.mae_max, 3) + "); ";
  }
  out.passed = out.passed && synthetic_seconds <= 120.0;
  out.detail += "regime runtime " + fmt(synthetic_seconds, 3) + " s";
  return out;
}

Outcome criterion_2() {
  Outcome out{!synthetic_runs.empty(), ""};
  for (std::size_t i = 0; i < synthetic_runs.size(); ++i) {
    const auto& r = synthetic_runs[i];
    const double rate = static_cast<double>(r.decay_ok) / r.trials;
    out.passed = out.passed && rate >= 0.95;
    out.detail += "J=" + std::to_string(i + 2) + ": " + fmt(100.0 * rate) + "% of trials; ";
  }
  out.detail += "lambda_{J+1}/lambda_1 <= 0.05 and lambda_J/lambda_1 >= 0.15";
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion_3() {
  const Seed root = 0xa11ce;
  const auto p = generate_probabilities(12, 3, derive_seed(root, 0));
  const std::vector<Index> dims = {100, 400, 1600};
  Outcome out{true, ""};
  std::vector<double> x, y;
  for (Index d : dims) {
    const auto rep = correlation_variance_check(p, d, 1000, derive_seed(root, static_cast<std::uint64_t>(d)));
    out.passed = out.passed && rep.max_ratio <= 1.1;
    out.detail += "D=" + std::to_string(d) + " max Var/(3/D) " + fmt(rep.max_ratio, 3) + "; ";
    x.push_back(std::log(static_cast<double>(d)));
    y.push_back(std::log(rep.mean_variance));
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  out.passed = out.passed && std::abs(slope + 1.0) <= 0.15;
  out.detail += "log-log slope " + fmt(slope, 4);
  return out;
}

Outcome criterion_4() {
  const Seed root = 0xb0b;
  double worst_shift = 0.0, worst_overlap = 1.0;
  for (int t = 0; t < 20; ++t) {
    const auto p = generate_probabilities(500, 3, derive_seed(root, static_cast<std::uint64_t>(t)));
    const auto rep = perturbation_check(p);
    worst_shift = std::max(worst_shift, rep.max_eigenvalue_shift);
    worst_overlap = std::min(worst_overlap, rep.min_eigenvector_overlap);
  }
  return {worst_shift < 1.0 && worst_overlap > 0.99,
          "20 draws: max |shift| " + fmt(worst_shift, 4) + ", min |overlap| " + fmt(worst_overlap, 8)};
}

// ---------------------------------------------------------------------------

Outcome criterion_5() {
  const Seed root = 0xc0ffee;
  double worst = 0.0;
  int failures = 0;
  for (int t = 0; t < 200; ++t) {
    Rng rng(derive_seed(root, static_cast<std::uint64_t>(t)));
    const Index j = rng.uniform_int(2, 6);
    const Index frames = rng.uniform_int(static_cast<int>(j), 300);

    // Random simplex points with one pure frame per source at shuffled rows.
    Eigen::MatrixXd p(frames, j);
    for (Index l = 0; l < frames; ++l) {
      for (Index k = 0; k < j; ++k) p(l, k) = rng.exponential(1.0);
      p.row(l) /= p.row(l).sum();
    }
    std::vector<Index> rows(static_cast<std::size_t>(frames));
    std::iota(rows.begin(), rows.end(), Index{0});
    std::shuffle(rows.begin(), rows.end(), rng.engine());
    for (Index k = 0; k < j; ++k) {
      p.row(rows[static_cast<std::size_t>(k)]).setZero();
      p(rows[static_cast<std::size_t>(k)], k) = 1.0;
    }
    // Invertible map with condition number up to 100.
    const Eigen::HouseholderQR<Eigen::MatrixXd> q1(gaussian(j, j, rng));
    const Eigen::HouseholderQR<Eigen::MatrixXd> q2(gaussian(j, j, rng));
    const Eigen::MatrixXd u = q1.householderQ();
    const Eigen::MatrixXd v = q2.householderQ();
    Eigen::VectorXd s(j);
    const double cond = 1.0 + 99.0 * rng.uniform();
    for (Index k = 0; k < j; ++k) s(k) = std::pow(cond, static_cast<double>(k) / static_cast<double>(j - 1));
    const Eigen::MatrixXd q = u * s.asDiagonal() * v.transpose();

    try {
      const SimplexEmbedding e{p * q.transpose()};
      const auto r = recover_probabilities(e, find_vertices(e));
      const double err = permuted_max_error(r.phat, p);
      worst = std::max(worst, err);
      if (!(err <= 1e-9)) ++failures;
    } catch (const Error&) {
      ++failures;
    }
  }
  return {failures == 0, "200 simplexes, J in 2..6: worst max error " + fmt(worst, 3) + ", failures " +
                             std::to_string(failures)};
}

// ---------------------------------------------------------------------------

Outcome criterion_6() {
  Rng rng(0x57f7);
  double worst_round_trip = 0.0, worst_parseval = 0.0;
  for (int n : {256, 2048}) {
    for (double overlap : {0.5, 0.75}) {
      MultiSignal x(2, Signal(static_cast<std::size_t>(7 * n + 321)));
      for (auto& c : x) {
        for (double& v : c) v = rng.normal();
      }
      const StftConfig cfg(n, overlap);
      const auto y = istft(stft(x, cfg));
      for (std::size_t c = 0; c < x.size(); ++c) {
        for (std::size_t t = 0; t < x[c].size(); ++t) {
          worst_round_trip = std::max(worst_round_trip, std::abs(y[c][t] - x[c][t]));
        }
      }

      // Per-frame Parseval on the windowed frame (no padding, so frame l
      // starts at sample l * hop).
      const StftConfig raw(n, overlap, WindowKind::kHann, 16000.0, PaddingMode::kNone);
      const auto s = stft(x, raw);
      const auto& w = raw.window();
      for (Index l = 0; l < s.frames(); ++l) {
        double time = 0.0;
        for (int i = 0; i < n; ++i) {
          const double v = x[0][static_cast<std::size_t>(l * raw.hop() + i)] * w[static_cast<std::size_t>(i)];
          time += v * v;
        }
        const auto& row = s.channels[0];
        double freq = std::norm(row(l, 0)) + std::norm(row(l, n / 2));
        for (int k = 1; k < n / 2; ++k) freq += 2.0 * std::norm(row(l, k));
        freq /= n;
        worst_parseval = std::max(worst_parseval, std::abs(freq - time) / time);
      }
    }
  }
  return {worst_round_trip <= 1e-10 && worst_parseval <= 1e-9,
          "N in {256,2048} x overlap in {0.5,0.75}: max round-trip error " + fmt(worst_round_trip, 3) +
              ", max Parseval relative error " + fmt(worst_parseval, 3)};
}

// ---------------------------------------------------------------------------

Outcome criterion_7() {
  const auto start = Clock::now();
  const Index mics = 8, frames = 40;
  const StftConfig cfg(62, 0.5);  // 32 bins
  Rng rng(0x7a7);
  double worst = 0.0;
  int cases = 0;
  for (Index j = 1; j <= 4; ++j) {
    for (int t = 0; t < 25; ++t, ++cases) {
      const Eigen::MatrixXcd atf_all = complex_gaussian(j * mics, cfg.bins(), rng);
      Spectrogram mix{std::vector<Eigen::MatrixXcd>(static_cast<std::size_t>(mics),
                                                    Eigen::MatrixXcd::Zero(frames, cfg.bins())),
                      cfg, 0};
      RtfEstimate truth;
      std::vector<Eigen::MatrixXcd> reference_images;
      for (Index s = 0; s < j; ++s) {
        const Eigen::MatrixXcd atf = atf_all.middleRows(s * mics, mics);
        const Eigen::MatrixXcd src = complex_gaussian(frames, cfg.bins(), rng);
        for (Index m = 0; m < mics; ++m) {
          mix.channels[static_cast<std::size_t>(m)] += (src.array().rowwise() * atf.row(m).array()).matrix();
        }
        Eigen::MatrixXcd h(mics, cfg.bins());
        for (Index m = 0; m < mics; ++m) h.row(m) = atf.row(m).array() / atf.row(0).array();
        truth.h.push_back(std::move(h));
        reference_images.push_back(src.array().rowwise() * atf.row(0).array());
      }
      const auto z = unmix_spectra(mix, build_unmixer(truth));
      for (Index s = 0; s < j; ++s) {
        const auto& want = reference_images[static_cast<std::size_t>(s)];
        const double err = (z.channels[static_cast<std::size_t>(s)] - want).cwiseAbs().maxCoeff() /
                           want.cwiseAbs().maxCoeff();
        worst = std::max(worst, err);
      }
    }
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return {worst <= 1e-6 && seconds <= 10.0, std::to_string(cases) + " mixtures, M=8, J in 1..4, K=32: max relative error " +
                                                fmt(worst, 3) + ", " + fmt(seconds, 3) + " s"};
}

// ---------------------------------------------------------------------------

Outcome criterion_8() {
  harness::ExperimentConfig cfg;  // 2 speakers, 10 s, short decay, ~0 dB input SIR
  cfg.sources = {2};
  cfg.trials = 20;
  cfg.known_count = false;  // the full chain, including counting
  cfg.baselines = true;
  cfg.threads = threads();
  const auto start = Clock::now();
  const auto r = harness::run_separation(cfg);
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  const bool complete = r.failures == 0 && r.proposed_sir.count == cfg.trials;
  const bool levels = r.proposed_sir.mean >= 10.0 && r.proposed_sdr.mean >= 4.0;
  const bool order = r.ideal_sir.mean >= r.semi_ideal_sir.mean - 0.5 &&
                     r.semi_ideal_sir.mean >= r.proposed_sir.mean - 0.5;
  const bool input = std::abs(r.input_sir.mean) <= 1.0;
  std::string detail = std::to_string(r.proposed_sir.count) + "/" + std::to_string(cfg.trials) +
                       " trials complete, input SIR " + fmt(r.input_sir.mean, 3) + " dB; SIR ideal " +
                       fmt(r.ideal_sir.mean, 4) + " / semi-ideal " + fmt(r.semi_ideal_sir.mean, 4) +
                       " / proposed " + fmt(r.proposed_sir.mean, 4) + " dB; proposed SDR " +
                       fmt(r.proposed_sdr.mean, 4) + " dB; " + fmt(seconds, 3) + " s";
  return {complete && levels && order && input && seconds <= 600.0, detail};
}

Outcome criterion_9() {
  harness::ExperimentConfig cfg;
  cfg.sources = {1, 2, 3};
  cfg.trials = 60;
  cfg.alpha_min = 0.09;
  cfg.alpha_max = 0.16;
  cfg.alpha_step = 0.01;
  cfg.threads = threads();
  const auto r = harness::run_counting(cfg);
  std::string curve;
  for (std::size_t i = 0; i < r.alphas.size(); ++i) {
    curve += (i ? " " : "") + fmt(r.alphas[i], 3) + ":" + fmt(r.accuracy[i], 3);
  }
  return {r.min_accuracy() >= 0.9 && r.max_accuracy() >= 0.95,
          "60 trials, J in {1,2,3}: accuracy " + curve + " (failures " + std::to_string(r.failures) + ")"};
}

Outcome criterion_10() {
  auto outputs = [](int thread_count) {
    harness::ExperimentConfig count_cfg;
    count_cfg.sources = {1, 2, 3};
    count_cfg.trials = 3;
    count_cfg.duration_s = 4.0;
    count_cfg.seed = 77;
    count_cfg.threads = thread_count;
    harness::ExperimentConfig sep_cfg = count_cfg;
    sep_cfg.sources = {2};
    sep_cfg.trials = 2;
    const auto c = harness::run_counting(count_cfg);
    const auto s = harness::run_separation(sep_cfg);
    const auto sc = harness::make_scenario(sep_cfg, 0);
    const auto p = run_pipeline(sc.mix.mixture, sep_cfg.pipeline());
    return std::vector<std::string>{harness::counting_json(c, count_cfg).dump(2),
                                    harness::counting_csv(c),
                                    harness::separation_json(s, sep_cfg).dump(2),
                                    harness::separation_csv(s),
                                    harness::pipeline_json(p).dump(2),
                                    harness::spectrum_csv(p.separation_spectrum),
                                    harness::matrix_csv(p.probabilities.phat, {"p0", "p1"})};
  };
  // Same seed and config both times; several workers so trial scheduling
  // differs between the runs. The reports echo the config, thread count
  // included, so the two runs must share it.
  const int workers = std::max(2, threads());
  const auto first = outputs(workers);
  const auto second = outputs(workers);
  int differing = 0;
  std::size_t bytes = 0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    differing += first[i] != second[i];
    bytes += first[i].size();
  }
  return {differing == 0, std::to_string(first.size()) + " JSON/CSV outputs (" + std::to_string(bytes) +
                              " bytes) from two identically seeded runs; " +
                              std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "synthetic simplex counting and probability recovery", criterion_1},
      {2, "eigenvalue decay in the synthetic regime", criterion_2},
      {3, "correlation variance law", criterion_3},
      {4, "diagonal perturbation of the oracle correlation", criterion_4},
      {5, "exact convex-geometry recovery", criterion_5},
      {6, "STFT round trip and Parseval", criterion_6},
      {7, "exact unmixing algebra", criterion_7},
      {8, "end-to-end two-speaker separation", criterion_8},
      {9, "source counting on simulated audio", criterion_9},
      {10, "determinism of reports", criterion_10},
  };
  // Runtime budgets for the criteria that state one (seconds).
  const auto budget = [](int id) {
    switch (id) {
      case 3: return 60.0;
      case 4: return 60.0;
      case 5: return 30.0;
      default: return std::numeric_limits<double>::infinity();
    }
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (seconds > budget(c.id)) {
      o.passed = false;
      o.detail += "; over the " + fmt(budget(c.id), 3) + " s budget";
    }
    failed += !o.passed;
    std::printf("%s  %2d  %s: %s [%.1f s]\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
