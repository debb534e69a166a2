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

#include <filesystem>
#include <string>

#include "voxprep/audio.hpp"
#include "voxprep/stft.hpp"

namespace voxprep {

struct SubtractParams {
  int fft_size = 2048;
  int hop = 512;
  double over_subtraction = 1.0;  // noise magnitude scale before subtracting
  double spectral_floor = 0.02;   // kept fraction of the input magnitude
};

void validate(const SubtractParams& p);

struct TrimParams {
  double silence_threshold_db = -55.0;
  double min_silence_s = 0.1;  // runs strictly longer than this are removed
  double pad_s = 0.1;
  double detection_frame_s = 0.01;
};

void validate(const TrimParams& p);

// Per-bin mean magnitude of the analysis frames taken from a clip's trailing
// segment, used as the stationary noise estimate for spectral subtraction.
struct NoiseProfile {
  int fft_size = 0;
  Eigen::ArrayXd bin_magnitudes;  // fft_size / 2 + 1 entries, all >= 0
  double source_seconds = 0.0;
  bool used_whole_clip = false;  // clip was shorter than the requested tail
};

// Averages frames over the final tail_s of the clip. Clips shorter than
// tail_s fall back to the whole clip (used_whole_clip set); clips shorter
// than one analysis window cannot form a profile (clip_too_short).
NoiseProfile estimate_noise_profile(const AudioClip& clip, double tail_s,
                                    const SubtractParams& params);

// max(mag - alpha * noise, beta * mag); never exceeds mag for beta < 1.
Eigen::ArrayXd subtract_magnitudes(const Eigen::Ref<const Eigen::ArrayXd>& mag,
                                   const Eigen::Ref<const Eigen::ArrayXd>& noise,
                                   const SubtractParams& params);

// Magnitude-domain subtraction with the input phase kept; output length
// equals input length exactly.
AudioClip spectral_subtract(const AudioClip& clip, const NoiseProfile& profile,
                            const SubtractParams& params);

// Removes leading/trailing silence runs strictly longer than min_silence_s
// (framewise RMS below the threshold), then pads both ends with pad_s of
// digital silence. Interior silences are untouched and the retained region
// is a contiguous slice of the input. An entirely silent clip raises
// Errc::all_silent so batch callers can flag it instead of crashing.
AudioClip trim_and_pad(const AudioClip& clip, const TrimParams& params);

enum class HookStatus { ok, failed, timeout };

struct HookResult {
  HookStatus status = HookStatus::failed;
  int exit_code = -1;
  std::string detail;
};

// Runs an external enhancer command with {input}/{output} placeholders
// replaced by shell-quoted paths. Success requires exit code 0 and a
// decodable output file; failures are reported, never thrown, so a batch
// can continue past bad clips. stderr goes to stderr_log when given.
HookResult enhance_external(const std::filesystem::path& input,
                            const std::filesystem::path& output,
                            const std::string& command_template, double timeout_s,
                            const std::filesystem::path& stderr_log = {});

}  // namespace voxprep
