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

#include <cmath>
#include <numeric>

#include "sbss/error.hpp"
#include "sbss/harness/metrics.hpp"
#include "test_support.hpp"

using namespace sbss;
using namespace sbss::harness;

namespace {

MultiSignal random_signals(int count, int n, Seed seed) {
  const Eigen::MatrixXd g = test::gaussian_matrix(count, n, seed);
  MultiSignal out(static_cast<std::size_t>(count), Signal(static_cast<std::size_t>(n)));
  for (int j = 0; j < count; ++j) {
    for (int t = 0; t < n; ++t) out[j][t] = g(j, t);
  }
  return out;
}

// Dense least-squares oracle: explicit matrix of delayed references over the
// full convolution support n + taps - 1.
Eigen::VectorXd project(const MultiSignal& refs, const std::vector<int>& subset, int taps,
                        const Eigen::VectorXd& e) {
  const Index len = e.size();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(len, static_cast<Index>(subset.size()) * taps);
  for (std::size_t a = 0; a < subset.size(); ++a) {
    const Signal& s = refs[subset[a]];
    for (int i = 0; i < taps; ++i) {
      for (std::size_t t = 0; t < s.size(); ++t) r(static_cast<Index>(t) + i, static_cast<Index>(a) * taps + i) = s[t];
    }
  }
  return r * r.colPivHouseholderQr().solve(e);
}

std::pair<double, double> oracle_scores(const Signal& est, const MultiSignal& refs, int j, int taps) {
  const Index len = static_cast<Index>(est.size()) + taps - 1;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(len);
  for (std::size_t t = 0; t < est.size(); ++t) e(static_cast<Index>(t)) = est[t];
  std::vector<int> all(refs.size());
  for (std::size_t i = 0; i < refs.size(); ++i) all[i] = static_cast<int>(i);
  const Eigen::VectorXd target = project(refs, {j}, taps, e);
  const Eigen::VectorXd joint = project(refs, all, taps, e);
  const double sir = 10.0 * std::log10(target.squaredNorm() / (joint - target).squaredNorm());
  const double sdr = 10.0 * std::log10(target.squaredNorm() / (e - target).squaredNorm());
  return {sir, sdr};
}

}  // namespace

TEST_CASE("scores match a dense least-squares oracle") {
  const int n = 300;
  for (int count : {2, 3}) {
    for (int taps : {1, 4}) {
      const MultiSignal refs = random_signals(count, n, 100 + count);
      const Eigen::MatrixXd mixing = test::gaussian_matrix(count, count, 200 + taps);
      const MultiSignal noise = random_signals(count, n, 300 + taps);
      MultiSignal est(count, Signal(n, 0.0));
      for (int i = 0; i < count; ++i) {
        for (int t = 0; t < n; ++t) {
          est[i][t] = 0.2 * noise[i][t];
          for (int k = 0; k < count; ++k) {
            // Dominant diagonal plus a one-sample echo of the target.
            const double w = (i == k ? 3.0 : 0.3) * mixing(i, k);
            est[i][t] += w * refs[k][t];
            if (i == k && t > 0) est[i][t] += 0.5 * refs[k][t - 1];
          }
        }
      }
      const auto rep = sir_sdr(est, refs, taps);
      for (int j = 0; j < count; ++j) {
        CHECK(rep.permutation[j] == j);
        const auto [sir, sdr] = oracle_scores(est[j], refs, j, taps);
        CHECK(rep.sir_db[j] == doctest::Approx(sir).epsilon(1e-6));
        CHECK(rep.sdr_db[j] == doctest::Approx(sdr).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("filtered references score at the cap") {
  MultiSignal refs = random_signals(2, 400, 7);
  // Silent tails, so the truncated estimate still lies in the delayed span.
  for (auto& r : refs) std::fill(r.end() - 8, r.end(), 0.0);
  MultiSignal est(2, Signal(400, 0.0));
  for (int t = 0; t < 400; ++t) {
    est[0][t] = 2.0 * refs[0][t] + (t >= 3 ? -0.7 * refs[0][t - 3] : 0.0);
    est[1][t] = -refs[1][t];
  }
  const auto rep = sir_sdr(est, refs, 8);
  for (int j = 0; j < 2; ++j) {
    CHECK(rep.sir_db[j] > 100.0);
    CHECK(rep.sdr_db[j] > 100.0);
    CHECK(rep.sir_db[j] <= kMetricCapDb);
  }
}

TEST_CASE("matching finds swapped outputs and ignores gain") {
  const MultiSignal refs = random_signals(3, 500, 9);
  const MultiSignal noise = random_signals(3, 500, 10);
  MultiSignal est(3, Signal(500));
  const int order[] = {2, 0, 1};  // estimate i carries reference order[i]
  for (int i = 0; i < 3; ++i) {
    for (int t = 0; t < 500; ++t) est[i][t] = refs[order[i]][t] + 0.1 * refs[(order[i] + 1) % 3][t] + 0.05 * noise[i][t];
  }
  const auto rep = sir_sdr(est, refs, 16);
  CHECK(rep.permutation == std::vector<int>{1, 2, 0});
  for (double s : rep.sir_db) CHECK(s == doctest::Approx(20.0).epsilon(0.1));

  MultiSignal scaled = est;
  for (auto& s : scaled) {
    for (double& v : s) v *= -3.0;
  }
  const auto rep2 = sir_sdr(scaled, refs, 16);
  for (int j = 0; j < 3; ++j) {
    CHECK(rep2.sir_db[j] == doctest::Approx(rep.sir_db[j]).epsilon(1e-9));
    CHECK(rep2.sdr_db[j] == doctest::Approx(rep.sdr_db[j]).epsilon(1e-9));
  }
  CHECK(rep.mean_sir() == doctest::Approx((rep.sir_db[0] + rep.sir_db[1] + rep.sir_db[2]) / 3.0));
}

TEST_CASE("metric input errors") {
  const MultiSignal refs = random_signals(2, 100, 11);
  MultiSignal est = refs;
  CHECK_THROWS_AS(sir_sdr({est[0]}, refs), Error);
  est[1].pop_back();
  CHECK_THROWS_AS(sir_sdr(est, refs), Error);
  MultiSignal zero = refs;
  std::fill(zero[1].begin(), zero[1].end(), 0.0);
  try {
    sir_sdr(refs, zero);
    FAIL("expected a degenerate reference");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateReference);
  }
  CHECK_THROWS_AS(sir_sdr(refs, refs, 0), Error);
}

TEST_CASE("input SIR is the image energy over the others") {
  const MultiSignal refs = random_signals(2, 200, 12);
  MultiSignal images = refs;
  const double e0 = std::inner_product(refs[0].begin(), refs[0].end(), refs[0].begin(), 0.0);
  const double e1 = std::inner_product(refs[1].begin(), refs[1].end(), refs[1].begin(), 0.0);
  for (double& v : images[0]) v *= 2.0;
  const auto sir = input_sir_db(images);
  CHECK(sir[0] == doctest::Approx(10.0 * std::log10(4.0 * e0 / e1)));
  CHECK(sir[1] == doctest::Approx(10.0 * std::log10(e1 / (4.0 * e0))));
  CHECK(input_sir_db({refs[0]}).front() == kMetricCapDb);
}
