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
#include <vector>

#include "voxprep/errors.hpp"

namespace voxprep {

using Samples = Eigen::ArrayXd;

// Mono waveform with amplitudes nominally in [-1, 1]. Multi-channel sources
// are downmixed on ingestion, so every clip in the library is single-channel.
struct AudioClip {
  int sample_rate = 0;
  Samples samples;

  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

// dBFS value assigned to a zero amplitude so level arithmetic stays total.
inline constexpr double kDbFloor = -120.0;

// 20*log10(a) for a > 0, kDbFloor for a == 0. Negative input is an error.
double amplitude_to_db(double amplitude);
double db_to_amplitude(double db);

double rms(const Eigen::Ref<const Samples>& x);

struct FrameLevel {
  Eigen::Index frame_index = 0;
  double rms_db = kDbFloor;
  bool is_silent = false;  // rms_db < threshold
};

Eigen::Index frame_sample_count(int sample_rate, double frame_s);

// Contiguous non-overlapping RMS frames; the last frame may be partial. A
// frame longer than the clip yields a single frame covering the whole clip.
std::vector<FrameLevel> frame_levels(const AudioClip& clip, double frame_s, double threshold_db);

}  // namespace voxprep
