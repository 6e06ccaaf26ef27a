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

#include "sbss/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "sbss/error.hpp"
#include "sbss/fft.hpp"

namespace sbss::harness {
namespace {

double ratio_db(double num, double den) {
  if (!(den > num * 1e-20)) return kMetricCapDb;
  if (!(num > 0.0)) return -kMetricCapDb;
  return std::min(kMetricCapDb, 10.0 * std::log10(num / den));
}

// Zero-padded spectra of every signal at a common FFT size, so that all
// correlations and filterings below are linear (not circular).
struct SpectralBank {
  int nfft = 0;
  std::vector<std::vector<std::complex<double>>> spectra;
};

SpectralBank make_bank(const MultiSignal& signals, int nfft) {
  const RealFft fft(nfft);
  SpectralBank bank;
  bank.nfft = nfft;
  std::vector<double> buf(static_cast<std::size_t>(nfft));
  for (const auto& s : signals) {
    std::fill(buf.begin(), buf.end(), 0.0);
    std::copy(s.begin(), s.end(), buf.begin());
    std::vector<std::complex<double>> spec(static_cast<std::size_t>(fft.bins()));
    fft.forward(buf, spec);
    bank.spectra.push_back(std::move(spec));
  }
  return bank;
}

// c[lag] = sum_t a(t + lag) b(t) for lag in [-(taps-1), taps-1], stored at
// index lag + taps - 1.
std::vector<double> cross_correlation(const std::vector<std::complex<double>>& fa,
                                      const std::vector<std::complex<double>>& fb, int nfft,
                                      int taps) {
  const RealFft fft(nfft);
  std::vector<std::complex<double>> prod(fa.size());
  for (std::size_t i = 0; i < fa.size(); ++i) prod[i] = fa[i] * std::conj(fb[i]);
  std::vector<double> circ(static_cast<std::size_t>(nfft));
  fft.inverse(prod, circ);
  std::vector<double> out(static_cast<std::size_t>(2 * taps - 1));
  for (int lag = -(taps - 1); lag <= taps - 1; ++lag) {
    const int idx = (lag + nfft) % nfft;
    out[static_cast<std::size_t>(lag + taps - 1)] = circ[static_cast<std::size_t>(idx)] / nfft;
  }
  return out;
}

// Projector onto the span of {ref_a delayed by 0..taps-1 : a in subset}.
class DelayedSpan {
 public:
  DelayedSpan(const SpectralBank& refs, std::vector<int> subset, int taps)
      : refs_(refs), subset_(std::move(subset)), taps_(taps) {
    const int k = static_cast<int>(subset_.size());
    Eigen::MatrixXd gram(k * taps, k * taps);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        // gram[(a,i),(b,j)] = sum_t r_a(t-i) r_b(t-j) = xc_ab(j - i)
        const auto xc = cross_correlation(refs_.spectra[static_cast<std::size_t>(subset_[static_cast<std::size_t>(a)])],
                                          refs_.spectra[static_cast<std::size_t>(subset_[static_cast<std::size_t>(b)])],
                                          refs_.nfft, taps);
        for (int i = 0; i < taps; ++i) {
          for (int j = 0; j < taps; ++j) {
            gram(a * taps + i, b * taps + j) = xc[static_cast<std::size_t>(j - i + taps - 1)];
          }
        }
      }
    }
    // Tiny diagonal loading keeps the factorization defined for signals
    // whose delayed copies are nearly collinear (e.g. narrowband).
    gram.diagonal().array() += 1e-10 * gram.diagonal().mean() + std::numeric_limits<double>::min();
    llt_.compute(gram);
  }

  // Projection of the signal with spectrum `fe` (zero-padded), returned as a
  // time signal of length `length`.
  std::vector<double> project(const std::vector<std::complex<double>>& fe, int length) const {
    const int k = static_cast<int>(subset_.size());
    Eigen::VectorXd rhs(k * taps_);
    for (int a = 0; a < k; ++a) {
      // rhs[(a,i)] = sum_t e(t) r_a(t - i) = xc_{e,a}(i)
      const auto xc = cross_correlation(fe, refs_.spectra[static_cast<std::size_t>(subset_[static_cast<std::size_t>(a)])],
                                        refs_.nfft, taps_);
      for (int i = 0; i < taps_; ++i) rhs(a * taps_ + i) = xc[static_cast<std::size_t>(i + taps_ - 1)];
    }
    const Eigen::VectorXd coef = llt_.solve(rhs);
    const RealFft fft(refs_.nfft);
    std::vector<std::complex<double>> acc(static_cast<std::size_t>(fft.bins()), 0.0);
    std::vector<double> buf(static_cast<std::size_t>(refs_.nfft), 0.0);
    std::vector<std::complex<double>> fc(static_cast<std::size_t>(fft.bins()));
    for (int a = 0; a < k; ++a) {
      std::fill(buf.begin(), buf.end(), 0.0);
      for (int i = 0; i < taps_; ++i) buf[static_cast<std::size_t>(i)] = coef(a * taps_ + i);
      fft.forward(buf, fc);
      const auto& fr = refs_.spectra[static_cast<std::size_t>(subset_[static_cast<std::size_t>(a)])];
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += fc[i] * fr[i];
    }
    fft.inverse(acc, buf);
    std::vector<double> out(static_cast<std::size_t>(length));
    for (int t = 0; t < length; ++t) out[static_cast<std::size_t>(t)] = buf[static_cast<std::size_t>(t)] / refs_.nfft;
    return out;
  }

 private:
  const SpectralBank& refs_;
  std::vector<int> subset_;
  int taps_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

double energy(const std::vector<double>& x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

}  // namespace

double MetricsReport::mean_sir() const {
  return sir_db.empty() ? 0.0 : std::accumulate(sir_db.begin(), sir_db.end(), 0.0) / static_cast<double>(sir_db.size());
}

double MetricsReport::mean_sdr() const {
  return sdr_db.empty() ? 0.0 : std::accumulate(sdr_db.begin(), sdr_db.end(), 0.0) / static_cast<double>(sdr_db.size());
}

MetricsReport sir_sdr(const MultiSignal& estimates, const MultiSignal& references, int taps) {
  const int count = static_cast<int>(references.size());
  if (count < 1 || static_cast<int>(estimates.size()) != count) {
    throw Error(ErrorCode::kShapeMismatch, "need as many estimates as references");
  }
  if (taps < 1) throw Error(ErrorCode::kInvalidArgument, "distortion filter needs >= 1 tap");
  const std::size_t n = references.front().size();
  for (const auto& s : references) {
    if (s.size() != n) throw Error(ErrorCode::kLengthMismatch, "references differ in length");
    if (energy(s) <= 0.0) throw Error(ErrorCode::kDegenerateReference, "a reference is all zeros");
  }
  for (const auto& s : estimates) {
    if (s.size() != n) throw Error(ErrorCode::kLengthMismatch, "estimate length differs from references");
  }
  const int length = static_cast<int>(n) + taps - 1;
  const int nfft = next_pow2(length + taps);
  const SpectralBank refs = make_bank(references, nfft);
  const SpectralBank ests = make_bank(estimates, nfft);

  std::vector<int> all(static_cast<std::size_t>(count));
  std::iota(all.begin(), all.end(), 0);
  const DelayedSpan joint(refs, all, taps);
  std::vector<DelayedSpan> single;
  single.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) single.emplace_back(refs, std::vector<int>{j}, taps);

  // sir[i][j], sdr[i][j]: estimate i scored against reference j.
  std::vector<std::vector<double>> sir(static_cast<std::size_t>(count), std::vector<double>(static_cast<std::size_t>(count)));
  auto sdr = sir;
  for (int i = 0; i < count; ++i) {
    std::vector<double> e(static_cast<std::size_t>(length), 0.0);
    std::copy(estimates[static_cast<std::size_t>(i)].begin(), estimates[static_cast<std::size_t>(i)].end(), e.begin());
    const auto& fe = ests.spectra[static_cast<std::size_t>(i)];
    const auto p_all = joint.project(fe, length);
    for (int j = 0; j < count; ++j) {
      const auto target = single[static_cast<std::size_t>(j)].project(fe, length);
      double e_target = energy(target), e_interf = 0.0, e_dist = 0.0;
      for (int t = 0; t < length; ++t) {
        const double interf = p_all[static_cast<std::size_t>(t)] - target[static_cast<std::size_t>(t)];
        const double dist = e[static_cast<std::size_t>(t)] - target[static_cast<std::size_t>(t)];
        e_interf += interf * interf;
        e_dist += dist * dist;
      }
      sir[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = ratio_db(e_target, e_interf);
      sdr[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = ratio_db(e_target, e_dist);
    }
  }

  std::vector<int> perm = all;
  std::vector<int> best = all;
  double best_total = -std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int j = 0; j < count; ++j) total += sir[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])][static_cast<std::size_t>(j)];
    if (total > best_total) {
      best_total = total;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  MetricsReport report;
  report.permutation = best;
  for (int j = 0; j < count; ++j) {
    const auto i = static_cast<std::size_t>(best[static_cast<std::size_t>(j)]);
    report.sir_db.push_back(sir[i][static_cast<std::size_t>(j)]);
    report.sdr_db.push_back(sdr[i][static_cast<std::size_t>(j)]);
  }
  return report;
}

std::vector<double> input_sir_db(const MultiSignal& reference_images) {
  const std::size_t count = reference_images.size();
  std::vector<double> out;
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t n = reference_images[j].size();
    std::vector<double> others(n, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
      if (i == j) continue;
      for (std::size_t t = 0; t < n; ++t) others[t] += reference_images[i][t];
    }
    out.push_back(count == 1 ? kMetricCapDb : ratio_db(energy(reference_images[j]), energy(others)));
  }
  return out;
}

}  // namespace sbss::harness
