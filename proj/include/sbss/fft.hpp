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

#include <complex>
#include <span>
#include <vector>

namespace sbss {

// Real-input DFT of a fixed length n backed by FFTW. forward() produces the
// n/2+1 non-negative frequency bins; inverse() is unnormalized (returns n
// times the signal). Plans are shared and safe to execute concurrently.
class RealFft {
 public:
  explicit RealFft(int n);

  int size() const { return n_; }
  int bins() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  int n_;
  void* forward_plan_;
  void* inverse_plan_;
};

// Smallest power of two >= n.
int next_pow2(int n);

// Full linear convolution (length a.size() + b.size() - 1) via FFT.
std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b);

}  // namespace sbss
