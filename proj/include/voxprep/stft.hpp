/* Copyright 2026 The Voxprep Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Dense>

#include "voxprep/audio.hpp"

namespace voxprep {

// Short-time transform with a periodic Hann analysis window. The hop must
// divide fft_size and be at most fft_size / 2, which makes the shifted
// windows sum to the constant fft_size / (2 * hop) at every sample, so
// stft_inverse(stft_forward(x)) == x up to floating-point rounding.
struct Stft {
  int fft_size = 0;
  int hop = 0;
  Eigen::Index signal_length = 0;
  Eigen::ArrayXXcd frames;  // (fft_size / 2 + 1) x frame count, column per frame
};

Eigen::ArrayXd hann_window(int size);

// Constant value of the shifted-window sum.
double overlap_add_gain(int fft_size, int hop);

void validate_stft_params(int fft_size, int hop);

// Analysis frames start at k * hop - (fft_size - hop); samples outside the
// signal are zero, so every input sample sees the full window sum.
Stft stft_forward(const Eigen::Ref<const Samples>& x, int fft_size, int hop);

// Overlap-add resynthesis, normalized and truncated to signal_length.
Samples stft_inverse(const Stft& stft);

}  // namespace voxprep
