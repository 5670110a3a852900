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
#pragma once

#include <vector>

#include "spindle/types.hpp"

namespace spindle {

// Plain discrete Fourier transform, X_k = sum_j x_j exp(-2 pi i k j / N).
// Trace lengths here are a few hundred points; the quadratic cost is
// irrelevant next to the propagator work.
std::vector<cx> dft(const std::vector<cx>& x);

struct Spectrum {
  std::vector<double> freq_hz;    // ascending, centered on zero
  std::vector<double> amplitude;  // |DFT|, same order
};

// Amplitude spectrum of a time trace sampled at dt, frequency-shifted so the
// axis runs from -1/(2 dt) to +1/(2 dt). The mean is subtracted first when
// remove_dc is set.
Spectrum amplitude_spectrum(const std::vector<cx>& fid, double dt, bool remove_dc = false);

// Amplitude-weighted variance of the frequency axis (second moment about the
// spectral center of mass).
double second_moment(const Spectrum& s);

size_t argmax(const std::vector<double>& v);

}  // namespace spindle
