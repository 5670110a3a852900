/* Copyright 2026 The Spindle Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "spindle/signal.hpp"

#include <cmath>

#include "spindle/error.hpp"

namespace spindle {

std::vector<cx> dft(const std::vector<cx>& x) {
  const size_t n = x.size();
  std::vector<cx> out(n, cx(0.0, 0.0));
  for (size_t k = 0; k < n; ++k) {
    cx acc = 0.0;
    for (size_t j = 0; j < n; ++j)
      acc += x[j] * std::exp(cx(0.0, -2.0 * pi * static_cast<double>(k * j % n) / n));
    out[k] = acc;
  }
  return out;
}

Spectrum amplitude_spectrum(const std::vector<cx>& fid, double dt, bool remove_dc) {
  if (fid.empty()) throw ValueError("amplitude_spectrum: empty trace");
  if (dt <= 0.0) throw ValueError("amplitude_spectrum: non-positive dt");
  std::vector<cx> x = fid;
  if (remove_dc) {
    cx mean = 0.0;
    for (const cx& v : x) mean += v;
    mean /= static_cast<double>(x.size());
    for (cx& v : x) v -= mean;
  }
  std::vector<cx> transformed = dft(x);
  const long n = static_cast<long>(x.size());
  Spectrum s;
  s.freq_hz.resize(n);
  s.amplitude.resize(n);
  // frequency bin k maps to k/(n dt), folded to the centered axis
  for (long i = 0; i < n; ++i) {
    long k = i - n / 2;  // centered index
    long src = (k + n) % n;
    s.freq_hz[i] = static_cast<double>(k) / (static_cast<double>(n) * dt);
    s.amplitude[i] = std::abs(transformed[src]);
  }
  return s;
}

double second_moment(const Spectrum& s) {
  double total = 0.0, mean = 0.0;
  for (size_t i = 0; i < s.amplitude.size(); ++i) {
    total += s.amplitude[i];
    mean += s.amplitude[i] * s.freq_hz[i];
  }
  if (total <= 0.0) throw DomainError("second_moment: empty spectrum");
  mean /= total;
  double m2 = 0.0;
  for (size_t i = 0; i < s.amplitude.size(); ++i)
    m2 += s.amplitude[i] * (s.freq_hz[i] - mean) * (s.freq_hz[i] - mean);
  return m2 / total;
}

size_t argmax(const std::vector<double>& v) {
  if (v.empty()) throw ValueError("argmax: empty vector");
  size_t best = 0;
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace spindle
