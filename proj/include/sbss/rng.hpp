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

#pragma once

#include <cstdint>
#include <random>

namespace sbss {

using Seed = std::uint64_t;

// SplitMix64 finalizer. Used to derive statistically independent child
// seeds from a parent seed and a stream index.
std::uint64_t mix_seed(std::uint64_t x);

// Child seed for `stream` under `parent`. Distinct streams give distinct,
// well-mixed seeds; the mapping is a pure function.
Seed derive_seed(Seed parent, std::uint64_t stream);

// Thin wrapper so every stochastic routine uses one engine type.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(mix_seed(seed)) {}

  double uniform() { return unif_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unif_(engine_); }
  double normal() { return norm_(engine_); }
  // Integer in [lo, hi].
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  double exponential(double mean) { return std::exponential_distribution<double>(1.0 / mean)(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> norm_{0.0, 1.0};
};

}  // namespace sbss
