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

#include "sbss/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "sbss/error.hpp"

namespace sbss {
namespace {

// FFTW's planner is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

PlanPair plans_for(int n) {
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  double* in = fftw_alloc_real(static_cast<std::size_t>(n));
  fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{fftw_plan_dft_r2c_1d(n, in, out, flags), fftw_plan_dft_c2r_1d(n, out, in, flags)};
  fftw_free(in);
  fftw_free(out);
  if (p.forward == nullptr || p.inverse == nullptr) {
    throw Error(ErrorCode::kNumericalFailure, "FFTW could not create a plan");
  }
  cache.emplace(n, p);
  return p;
}

}  // namespace

RealFft::RealFft(int n) : n_(n) {
  if (n < 1) throw Error(ErrorCode::kInvalidDimension, "FFT length must be positive");
  const PlanPair p = plans_for(n);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (static_cast<int>(in.size()) != n_ || static_cast<int>(out.size()) != bins()) {
    throw Error(ErrorCode::kShapeMismatch, "FFT buffer size mismatch");
  }
  // r2c with FFTW_ESTIMATE does not modify its input.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  if (static_cast<int>(in.size()) != bins() || static_cast<int>(out.size()) != n_) {
    throw Error(ErrorCode::kShapeMismatch, "FFT buffer size mismatch");
  }
  // c2r overwrites its input.
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const int out_len = static_cast<int>(a.size() + b.size() - 1);
  const int n = next_pow2(out_len);
  const RealFft fft(n);
  std::vector<double> pa(static_cast<std::size_t>(n), 0.0), pb(static_cast<std::size_t>(n), 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  std::vector<std::complex<double>> fa(static_cast<std::size_t>(fft.bins())),
      fb(static_cast<std::size_t>(fft.bins()));
  fft.forward(pa, fa);
  fft.forward(pb, fb);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  fft.inverse(fa, pa);
  std::vector<double> out(pa.begin(), pa.begin() + out_len);
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace sbss
