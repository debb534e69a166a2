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

#include "voxprep/stft.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace voxprep {

Eigen::ArrayXd hann_window(int size) {
  // Periodic form: the shifted sum is exactly constant when hop divides size.
  Eigen::ArrayXd w(size);
  for (int i = 0; i < size; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / size);
  }
  return w;
}

double overlap_add_gain(int fft_size, int hop) {
  return static_cast<double>(fft_size) / (2.0 * hop);
}

void validate_stft_params(int fft_size, int hop) {
  if (fft_size < 2 || hop < 1) {
    raise(Errc::invalid_argument, "stft: fft_size and hop must be positive");
  }
  if (fft_size % hop != 0 || hop > fft_size / 2) {
    raise(Errc::invalid_argument,
          "stft: hop must divide fft_size and be at most fft_size/2 for constant overlap-add");
  }
}

Stft stft_forward(const Eigen::Ref<const Samples>& x, int fft_size, int hop) {
  validate_stft_params(fft_size, hop);
  const Eigen::Index n = x.size();
  const Eigen::Index pad = fft_size - hop;

  Stft out;
  out.fft_size = fft_size;
  out.hop = hop;
  out.signal_length = n;
  if (n == 0) {
    out.frames.resize(fft_size / 2 + 1, 0);
    return out;
  }

  // Last frame start must reach n - 1 so the final sample gets full coverage.
  const Eigen::Index n_frames = (n - 1 + pad) / hop + 1;
  out.frames.resize(fft_size / 2 + 1, n_frames);

  const Eigen::ArrayXd window = hann_window(fft_size);
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);

  std::vector<double> buffer(static_cast<std::size_t>(fft_size));
  std::vector<std::complex<double>> spectrum;
  for (Eigen::Index k = 0; k < n_frames; ++k) {
    const Eigen::Index start = k * hop - pad;
    for (int i = 0; i < fft_size; ++i) {
      const Eigen::Index j = start + i;
      buffer[static_cast<std::size_t>(i)] = (j >= 0 && j < n) ? x[j] * window[i] : 0.0;
    }
    fft.fwd(spectrum, buffer);
    for (int b = 0; b <= fft_size / 2; ++b) {
      out.frames(b, k) = spectrum[static_cast<std::size_t>(b)];
    }
  }
  return out;
}

Samples stft_inverse(const Stft& stft) {
  validate_stft_params(stft.fft_size, stft.hop);
  const Eigen::Index n = stft.signal_length;
  if (n == 0) return Samples();

  const Eigen::Index pad = stft.fft_size - stft.hop;
  Samples acc = Samples::Zero(n + pad + stft.fft_size);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);

  std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(stft.fft_size / 2 + 1));
  std::vector<double> frame;
  for (Eigen::Index k = 0; k < stft.frames.cols(); ++k) {
    for (int b = 0; b <= stft.fft_size / 2; ++b) {
      spectrum[static_cast<std::size_t>(b)] = stft.frames(b, k);
    }
    fft.inv(frame, spectrum, stft.fft_size);
    const Eigen::Index start = k * stft.hop;  // offset within the padded buffer
    for (int i = 0; i < stft.fft_size; ++i) {
      acc[start + i] += frame[static_cast<std::size_t>(i)];
    }
  }
  return acc.segment(pad, n) / overlap_add_gain(stft.fft_size, stft.hop);
}

}  // namespace voxprep
