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

#include "sbss/harness/room.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sbss/error.hpp"
#include "sbss/fft.hpp"

namespace sbss::harness {
namespace {

constexpr int kSincHalfWidth = 32;

// Hann-windowed sinc centred at `delay` samples, normalized to unit energy.
void add_direct_path(Signal& h, double delay) {
  const int center = static_cast<int>(std::floor(delay));
  const double frac = delay - center;
  Signal taps;
  double energy = 0.0;
  for (int i = -kSincHalfWidth; i <= kSincHalfWidth + 1; ++i) {
    const double x = i - frac;
    const double sinc = std::abs(x) < 1e-12 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    const double win = 0.5 + 0.5 * std::cos(std::numbers::pi * x / (kSincHalfWidth + 1));
    taps.push_back(sinc * win);
    energy += taps.back() * taps.back();
  }
  const double scale = 1.0 / std::sqrt(energy);
  for (std::size_t t = 0; t < taps.size(); ++t) {
    const int pos = center - kSincHalfWidth + static_cast<int>(t);
    if (pos >= 0 && pos < static_cast<int>(h.size())) h[static_cast<std::size_t>(pos)] += taps[t] * scale;
  }
}

}  // namespace

void draw_positions(int sources, Seed seed, std::vector<double>& angles_deg,
                    std::vector<double>& distances_m, double min_separation_deg) {
  std::vector<double> grid;
  for (int a = -90; a <= 90; a += 15) grid.push_back(a);
  Rng rng(seed);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    angles_deg.clear();
    std::vector<double> pool = grid;
    bool ok = true;
    for (int j = 0; j < sources && ok; ++j) {
      std::vector<double> allowed;
      for (double a : pool) {
        const bool far = std::all_of(angles_deg.begin(), angles_deg.end(), [&](double b) {
          return std::abs(a - b) >= min_separation_deg - 1e-9;
        });
        if (far) allowed.push_back(a);
      }
      if (allowed.empty()) {
        ok = false;
        break;
      }
      angles_deg.push_back(allowed[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<int>(allowed.size()) - 1))]);
    }
    if (ok) break;
  }
  if (static_cast<int>(angles_deg.size()) != sources) {
    throw Error(ErrorCode::kInvalidArgument, "cannot place " + std::to_string(sources) +
                                                 " sources with the requested separation");
  }
  distances_m.clear();
  for (int j = 0; j < sources; ++j) distances_m.push_back(rng.uniform() < 0.5 ? 1.0 : 2.0);
}

RoomSpec make_room(const RoomGeometry& g, Seed seed) {
  const int sources = static_cast<int>(g.angles_deg.size());
  if (sources < 1 || g.distances_m.size() != g.angles_deg.size()) {
    throw Error(ErrorCode::kInvalidDimension, "need one angle and one distance per source");
  }
  if (g.mics < 2) throw Error(ErrorCode::kInvalidDimension, "need at least two microphones");
  if (!(g.decay_s > 0.0)) throw Error(ErrorCode::kInvalidArgument, "decay must be positive");

  RoomSpec room;
  room.angles_deg = g.angles_deg;
  room.distances_m = g.distances_m;
  room.decay_s = g.decay_s;
  room.sample_rate = g.sample_rate;
  room.seed = seed;

  const double fs = g.sample_rate;
  const double tail_s = g.tail_length_s > 0.0 ? g.tail_length_s : 6.9 * g.decay_s;
  double max_delay = 0.0;
  room.direct_delay.assign(static_cast<std::size_t>(sources), std::vector<double>(static_cast<std::size_t>(g.mics)));
  for (int j = 0; j < sources; ++j) {
    const double theta = g.angles_deg[static_cast<std::size_t>(j)] * std::numbers::pi / 180.0;
    const double r = g.distances_m[static_cast<std::size_t>(j)];
    const double sx = r * std::sin(theta);
    const double sy = r * std::cos(theta);
    for (int m = 0; m < g.mics; ++m) {
      const double mx = (m - 0.5 * (g.mics - 1)) * g.mic_spacing_m;
      const double d = std::hypot(sx - mx, sy);
      const double delay = d / g.sound_speed * fs;
      room.direct_delay[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] = delay;
      max_delay = std::max(max_delay, delay);
    }
  }
  const std::size_t length =
      static_cast<std::size_t>(std::ceil(max_delay + tail_s * fs)) + kSincHalfWidth + 2;

  room.filters.assign(static_cast<std::size_t>(sources), std::vector<Signal>(static_cast<std::size_t>(g.mics)));
  for (int j = 0; j < sources; ++j) {
    for (int m = 0; m < g.mics; ++m) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(j * 1000 + m)));
      Signal h(length, 0.0);
      const double delay = room.direct_delay[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)];
      add_direct_path(h, delay);

      Signal tail(length, 0.0);
      double t = delay + kSincHalfWidth;  // reflections start after the direct path
      double tail_energy = 0.0;
      while (true) {
        t += rng.exponential(fs / g.reflections_per_s);
        if (t >= delay + tail_s * fs || t >= static_cast<double>(length)) break;
        const double amp = rng.normal() * std::exp(-(t - delay) / (g.decay_s * fs));
        tail[static_cast<std::size_t>(t)] += amp;
      }
      for (double v : tail) tail_energy += v * v;
      if (tail_energy > 0.0) {
        const double scale = std::sqrt(std::pow(10.0, -g.drr_db / 10.0) / tail_energy);
        for (std::size_t i = 0; i < length; ++i) h[i] += tail[i] * scale;
      }
      room.filters[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] = std::move(h);
    }
  }
  return room;
}

Mixture simulate_mixture(const RoomSpec& room, const std::vector<Signal>& clean) {
  const int sources = room.sources();
  if (static_cast<int>(clean.size()) != sources || sources < 1) {
    throw Error(ErrorCode::kShapeMismatch, "need one clean signal per room source");
  }
  if (room.mics() < 2) throw Error(ErrorCode::kInvalidDimension, "need at least two microphones");
  const std::size_t n = clean.front().size();
  for (const auto& s : clean) {
    if (s.size() != n) throw Error(ErrorCode::kLengthMismatch, "clean signals differ in length");
  }
  Mixture mix;
  mix.images.resize(static_cast<std::size_t>(sources));
  for (int j = 0; j < sources; ++j) {
    auto& image = mix.images[static_cast<std::size_t>(j)];
    for (int m = 0; m < room.mics(); ++m) {
      Signal y = fft_convolve(clean[static_cast<std::size_t>(j)],
                              room.filters[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)]);
      y.resize(n);  // keep the clean-signal length
      image.push_back(std::move(y));
    }
  }
  mix.mixture.assign(static_cast<std::size_t>(room.mics()), Signal(n, 0.0));
  for (int m = 0; m < room.mics(); ++m) {
    auto& out = mix.mixture[static_cast<std::size_t>(m)];
    for (int j = 0; j < sources; ++j) {
      const auto& y = mix.images[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)];
      for (std::size_t t = 0; t < n; ++t) out[t] += y[t];
    }
  }
  return mix;
}

}  // namespace sbss::harness
