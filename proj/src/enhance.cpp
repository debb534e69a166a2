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

#include "voxprep/enhance.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <vector>

#include "voxprep/subprocess.hpp"
#include "voxprep/wav.hpp"

namespace voxprep {

void validate(const SubtractParams& p) {
  validate_stft_params(p.fft_size, p.hop);
  if (p.over_subtraction < 0.0) {
    raise(Errc::invalid_argument, "subtract: over_subtraction must be >= 0");
  }
  if (p.spectral_floor < 0.0 || p.spectral_floor >= 1.0) {
    raise(Errc::invalid_argument, "subtract: spectral_floor must be in [0, 1)");
  }
}

void validate(const TrimParams& p) {
  if (p.min_silence_s <= 0.0) raise(Errc::invalid_argument, "trim: min_silence_s must be > 0");
  if (p.pad_s < 0.0) raise(Errc::invalid_argument, "trim: pad_s must be >= 0");
  if (p.silence_threshold_db >= 0.0) {
    raise(Errc::invalid_argument, "trim: silence threshold must be negative dBFS");
  }
  if (p.detection_frame_s <= 0.0) {
    raise(Errc::invalid_argument, "trim: detection_frame_s must be > 0");
  }
}

NoiseProfile estimate_noise_profile(const AudioClip& clip, double tail_s,
                                    const SubtractParams& params) {
  validate(params);
  if (tail_s <= 0.0) raise(Errc::invalid_argument, "noise profile: tail_s must be > 0");
  const Eigen::Index n = clip.samples.size();
  if (n == 0) raise(Errc::empty_audio, "noise profile: empty clip");
  if (n < params.fft_size) {
    raise(Errc::clip_too_short, "noise profile: clip shorter than one analysis window (" +
                                    std::to_string(n) + " < " + std::to_string(params.fft_size) +
                                    " samples)");
  }

  const Eigen::Index requested = static_cast<Eigen::Index>(std::llround(tail_s * clip.sample_rate));
  // At least one full window; never more than the clip.
  const Eigen::Index seg_len = std::min<Eigen::Index>(
      n, std::max<Eigen::Index>(requested, params.fft_size));
  const auto segment = clip.samples.tail(seg_len);

  const Eigen::ArrayXd window = hann_window(params.fft_size);
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);

  NoiseProfile profile;
  profile.fft_size = params.fft_size;
  profile.bin_magnitudes = Eigen::ArrayXd::Zero(params.fft_size / 2 + 1);
  profile.source_seconds = static_cast<double>(seg_len) / clip.sample_rate;
  profile.used_whole_clip = requested > n;

  std::vector<double> buffer(static_cast<std::size_t>(params.fft_size));
  std::vector<std::complex<double>> spectrum;
  Eigen::Index frames = 0;
  for (Eigen::Index start = 0; start + params.fft_size <= seg_len; start += params.hop, ++frames) {
    for (int i = 0; i < params.fft_size; ++i) {
      buffer[static_cast<std::size_t>(i)] = segment[start + i] * window[i];
    }
    fft.fwd(spectrum, buffer);
    for (int b = 0; b <= params.fft_size / 2; ++b) {
      profile.bin_magnitudes[b] += std::abs(spectrum[static_cast<std::size_t>(b)]);
    }
  }
  profile.bin_magnitudes /= static_cast<double>(frames);
  return profile;
}

Eigen::ArrayXd subtract_magnitudes(const Eigen::Ref<const Eigen::ArrayXd>& mag,
                                   const Eigen::Ref<const Eigen::ArrayXd>& noise,
                                   const SubtractParams& params) {
  return (mag - params.over_subtraction * noise).max(params.spectral_floor * mag);
}

AudioClip spectral_subtract(const AudioClip& clip, const NoiseProfile& profile,
                            const SubtractParams& params) {
  validate(params);
  if (profile.fft_size != params.fft_size ||
      profile.bin_magnitudes.size() != params.fft_size / 2 + 1) {
    raise(Errc::invalid_argument, "spectral_subtract: profile fft_size mismatch");
  }
  if (clip.samples.size() == 0) raise(Errc::empty_audio, "spectral_subtract: empty clip");

  Stft stft = stft_forward(clip.samples, params.fft_size, params.hop);
  for (Eigen::Index k = 0; k < stft.frames.cols(); ++k) {
    auto frame = stft.frames.col(k);
    const Eigen::ArrayXd mag = frame.abs();
    const Eigen::ArrayXd kept = subtract_magnitudes(mag, profile.bin_magnitudes, params);
    // Rescale each bin, keeping the original phase. Zero-magnitude bins stay zero.
    for (Eigen::Index b = 0; b < mag.size(); ++b) {
      frame[b] = mag[b] > 0.0 ? frame[b] * (kept[b] / mag[b]) : std::complex<double>(0.0, 0.0);
    }
  }

  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples = stft_inverse(stft);
  return out;
}

AudioClip trim_and_pad(const AudioClip& clip, const TrimParams& params) {
  validate(params);
  const Eigen::Index n = clip.samples.size();
  if (n == 0) raise(Errc::empty_audio, "trim_and_pad: empty clip");

  const auto levels = frame_levels(clip, params.detection_frame_s, params.silence_threshold_db);
  Eigen::Index first_active = -1;
  Eigen::Index last_active = -1;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(levels.size()); ++i) {
    if (!levels[static_cast<std::size_t>(i)].is_silent) {
      if (first_active < 0) first_active = i;
      last_active = i;
    }
  }
  if (first_active < 0) {
    raise(Errc::all_silent, "trim_and_pad: clip is entirely below the silence threshold");
  }

  const Eigen::Index frame_len = frame_sample_count(clip.sample_rate, params.detection_frame_s);
  const Eigen::Index min_run =
      static_cast<Eigen::Index>(std::llround(params.min_silence_s * clip.sample_rate));

  const Eigen::Index lead_samples = first_active * frame_len;
  const Eigen::Index start = lead_samples > min_run ? lead_samples : 0;

  const Eigen::Index active_end = std::min(n, (last_active + 1) * frame_len);
  const Eigen::Index trail_samples = n - active_end;
  const Eigen::Index end = trail_samples > min_run ? active_end : n;

  const Eigen::Index pad = static_cast<Eigen::Index>(std::llround(params.pad_s * clip.sample_rate));
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples = Samples::Zero(pad + (end - start) + pad);
  out.samples.segment(pad, end - start) = clip.samples.segment(start, end - start);
  return out;
}

HookResult enhance_external(const std::filesystem::path& input,
                            const std::filesystem::path& output,
                            const std::string& command_template, double timeout_s,
                            const std::filesystem::path& stderr_log) {
  HookResult result;
  if (command_template.empty()) {
    result.detail = "no enhancer command configured";
    return result;
  }
  const std::string command =
      expand_command(command_template, {{"input", input.string()}, {"output", output.string()}});
  const CommandResult cmd = run_command(command, timeout_s, stderr_log);
  result.exit_code = cmd.exit_code;
  if (cmd.timed_out) {
    result.status = HookStatus::timeout;
    result.detail = "enhancer timed out after " + std::to_string(timeout_s) + "s";
    return result;
  }
  if (cmd.exit_code != 0) {
    result.status = HookStatus::failed;
    result.detail = "enhancer exited with code " + std::to_string(cmd.exit_code);
    return result;
  }
  // The contract is a decodable output file, not just exit 0.
  try {
    const WavInfo info = probe_wav(output);
    if (info.frames == 0) {
      result.status = HookStatus::failed;
      result.detail = "enhancer produced an empty file";
      return result;
    }
  } catch (const Error& e) {
    result.status = HookStatus::failed;
    result.detail = std::string("enhancer output unreadable: ") + e.what();
    return result;
  }
  result.status = HookStatus::ok;
  return result;
}

}  // namespace voxprep
