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

#include <cstdint>
#include <filesystem>

#include "voxprep/audio.hpp"

namespace voxprep {

enum class WavFormat { pcm16, float32 };

struct WavWriteStats {
  // Samples that fell outside [-1, 1] and were clamped before encoding.
  std::uint64_t clamped_samples = 0;
};

struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  std::uint64_t frames = 0;
  double duration_s = 0.0;
  WavFormat format = WavFormat::pcm16;
};

// Decodes a RIFF/WAVE file. Accepts 16-bit PCM and 32-bit IEEE float data
// (plain or WAVE_FORMAT_EXTENSIBLE); anything else is unsupported_encoding.
// Channels are downmixed to mono by arithmetic mean and 16-bit samples map
// to amplitude s / 32768.
AudioClip read_wav(const std::filesystem::path& path);

// Encodes a clip, 16-bit PCM by default. Out-of-range samples are clamped
// and counted. An empty clip is refused (empty_audio).
WavWriteStats write_wav(const AudioClip& clip, const std::filesystem::path& path,
                        WavFormat format = WavFormat::pcm16);

// Header-only scan, used to fill manifest durations without decoding data.
WavInfo probe_wav(const std::filesystem::path& path);

}  // namespace voxprep
