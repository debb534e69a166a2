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

#include "voxprep/audio.hpp"

#include <cmath>

namespace voxprep {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::unreadable_file: return "unreadable_file";
    case Errc::unsupported_encoding: return "unsupported_encoding";
    case Errc::empty_audio: return "empty_audio";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::clip_too_short: return "clip_too_short";
    case Errc::all_silent: return "all_silent";
    case Errc::io_error: return "io_error";
    case Errc::bad_manifest: return "bad_manifest";
    case Errc::bad_config: return "bad_config";
    case Errc::bad_checkpoint: return "bad_checkpoint";
    case Errc::missing_scores: return "missing_scores";
    case Errc::insufficient_hours: return "insufficient_hours";
    case Errc::missing_original: return "missing_original";
    case Errc::protocol_error: return "protocol_error";
  }
  return "unknown";
}

double amplitude_to_db(double amplitude) {
  if (amplitude < 0.0 || std::isnan(amplitude)) {
    raise(Errc::invalid_argument, "amplitude_to_db: amplitude must be >= 0");
  }
  if (amplitude == 0.0) return kDbFloor;
  return 20.0 * std::log10(amplitude);
}

double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }

double rms(const Eigen::Ref<const Samples>& x) {
  if (x.size() == 0) return 0.0;
  return std::sqrt(x.square().mean());
}

Eigen::Index frame_sample_count(int sample_rate, double frame_s) {
  if (sample_rate <= 0 || frame_s <= 0.0) {
    raise(Errc::invalid_argument, "frame_sample_count: rate and frame length must be positive");
  }
  return std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::llround(frame_s * sample_rate)));
}

std::vector<FrameLevel> frame_levels(const AudioClip& clip, double frame_s, double threshold_db) {
  const Eigen::Index n = clip.samples.size();
  const Eigen::Index frame_len = frame_sample_count(clip.sample_rate, frame_s);
  std::vector<FrameLevel> out;
  if (n == 0) return out;
  out.reserve(static_cast<std::size_t>((n + frame_len - 1) / frame_len));
  for (Eigen::Index start = 0, idx = 0; start < n; start += frame_len, ++idx) {
    const Eigen::Index len = std::min(frame_len, n - start);
    const double level = amplitude_to_db(rms(clip.samples.segment(start, len)));
    out.push_back({idx, level, level < threshold_db});
  }
  return out;
}

}  // namespace voxprep
