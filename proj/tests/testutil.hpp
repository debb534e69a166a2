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

// Shared test helpers: a portable deterministic RNG, synthetic signal
// builders, a from-scratch reference WAV encoder (kept independent of the
// library's writer so codec tests have a second opinion), temp dirs and
// synthetic scored corpora.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "voxprep/curation.hpp"
#include "voxprep/wav.hpp"

namespace testutil {

namespace fs = std::filesystem;

// mt19937_64 is bit-portable; the double mappings below avoid the
// implementation-defined std distributions so frozen values stay stable.
struct Rng {
  std::mt19937_64 engine;

  explicit Rng(std::uint64_t seed) : engine(seed) {}

  double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t integer(std::uint64_t n) { return engine() % n; }

  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
};

inline voxprep::AudioClip make_clip(int sample_rate, voxprep::Samples samples) {
  voxprep::AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples = std::move(samples);
  return clip;
}

inline voxprep::AudioClip make_tone(int sample_rate, double seconds, double freq, double amp,
                                    double phase = 0.0) {
  const auto n = static_cast<Eigen::Index>(std::llround(seconds * sample_rate));
  voxprep::Samples s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s[i] = amp * std::sin(2.0 * std::numbers::pi * freq * i / sample_rate + phase);
  }
  return make_clip(sample_rate, std::move(s));
}

inline voxprep::AudioClip make_noise(Rng& rng, int sample_rate, double seconds, double sigma) {
  const auto n = static_cast<Eigen::Index>(std::llround(seconds * sample_rate));
  voxprep::Samples s(n);
  for (Eigen::Index i = 0; i < n; ++i) s[i] = sigma * rng.gaussian();
  return make_clip(sample_rate, std::move(s));
}

inline voxprep::AudioClip make_silence(int sample_rate, double seconds) {
  const auto n = static_cast<Eigen::Index>(std::llround(seconds * sample_rate));
  return make_clip(sample_rate, voxprep::Samples::Zero(n));
}

inline voxprep::AudioClip concat(const std::vector<voxprep::AudioClip>& parts) {
  Eigen::Index total = 0;
  for (const auto& p : parts) total += p.samples.size();
  voxprep::Samples s(total);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    s.segment(at, p.samples.size()) = p.samples;
    at += p.samples.size();
  }
  return make_clip(parts.front().sample_rate, std::move(s));
}

inline voxprep::AudioClip mix(const voxprep::AudioClip& a, const voxprep::AudioClip& b) {
  voxprep::AudioClip out = a;
  const Eigen::Index n = std::min(a.samples.size(), b.samples.size());
  out.samples.head(n) += b.samples.head(n);
  return out;
}

// SNR of `test` against a known clean reference, in dB.
inline double snr_db(const voxprep::Samples& clean, const voxprep::Samples& test) {
  const Eigen::Index n = std::min(clean.size(), test.size());
  const double signal = clean.head(n).square().sum();
  const double noise = (test.head(n) - clean.head(n)).square().sum();
  if (noise <= 0.0) return 120.0;
  return 10.0 * std::log10(signal / noise);
}

struct TempDir {
  fs::path path;

  explicit TempDir(const std::string& prefix) {
    std::string tmpl = (fs::temp_directory_path() / (prefix + ".XXXXXX")).string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (::mkdtemp(buf.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path = buf.data();
  }

  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }

  fs::path operator/(const std::string& name) const { return path / name; }
};

// ---- reference WAV encoder (independent of voxprep::write_wav) ------------

inline void push_u16(std::vector<unsigned char>& v, std::uint16_t x) {
  v.push_back(x & 0xFF);
  v.push_back(x >> 8);
}

inline void push_u32(std::vector<unsigned char>& v, std::uint32_t x) {
  v.push_back(x & 0xFF);
  v.push_back((x >> 8) & 0xFF);
  v.push_back((x >> 16) & 0xFF);
  v.push_back((x >> 24) & 0xFF);
}

inline void write_reference_wav_pcm16(const fs::path& path, int sample_rate, int channels,
                                      const std::vector<std::int16_t>& interleaved) {
  std::vector<unsigned char> out;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(interleaved.size() * 2);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  push_u32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  push_u32(out, 16);
  push_u16(out, 1);  // PCM
  push_u16(out, static_cast<std::uint16_t>(channels));
  push_u32(out, static_cast<std::uint32_t>(sample_rate));
  push_u32(out, static_cast<std::uint32_t>(sample_rate * channels * 2));
  push_u16(out, static_cast<std::uint16_t>(channels * 2));
  push_u16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  push_u32(out, data_bytes);
  for (std::int16_t s : interleaved) push_u16(out, static_cast<std::uint16_t>(s));
  std::ofstream f(path, std::ios::binary);
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

inline void write_reference_wav_float32(const fs::path& path, int sample_rate, int channels,
                                        const std::vector<float>& interleaved) {
  std::vector<unsigned char> out;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(interleaved.size() * 4);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  push_u32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  push_u32(out, 16);
  push_u16(out, 3);  // IEEE float
  push_u16(out, static_cast<std::uint16_t>(channels));
  push_u32(out, static_cast<std::uint32_t>(sample_rate));
  push_u32(out, static_cast<std::uint32_t>(sample_rate * channels * 4));
  push_u16(out, static_cast<std::uint16_t>(channels * 4));
  push_u16(out, 32);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  push_u32(out, data_bytes);
  for (float s : interleaved) {
    std::uint32_t bits;
    std::memcpy(&bits, &s, 4);
    push_u32(out, bits);
  }
  std::ofstream f(path, std::ios::binary);
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

// WAVE_FORMAT_EXTENSIBLE wrapper around 16-bit PCM mono data.
inline void write_reference_wav_extensible_pcm16(const fs::path& path, int sample_rate,
                                                 const std::vector<std::int16_t>& samples) {
  std::vector<unsigned char> out;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  push_u32(out, 36 + 24 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  push_u32(out, 40);
  push_u16(out, 0xFFFE);  // extensible
  push_u16(out, 1);
  push_u32(out, static_cast<std::uint32_t>(sample_rate));
  push_u32(out, static_cast<std::uint32_t>(sample_rate * 2));
  push_u16(out, 2);
  push_u16(out, 16);
  push_u16(out, 22);  // cbSize
  push_u16(out, 16);  // valid bits
  push_u32(out, 0x4);  // channel mask: front center
  // KSDATAFORMAT_SUBTYPE_PCM: first u16 is the resolved format tag.
  push_u16(out, 1);
  push_u16(out, 0x0000);
  const unsigned char guid_tail[12] = {0x00, 0x00, 0x10, 0x00, 0x80, 0x00,
                                       0x00, 0xAA, 0x00, 0x38, 0x9B, 0x71};
  out.insert(out.end(), guid_tail, guid_tail + 12);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  push_u32(out, data_bytes);
  for (std::int16_t s : samples) push_u16(out, static_cast<std::uint16_t>(s));
  std::ofstream f(path, std::ios::binary);
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

// One WAV whose bytes are written with 24-bit PCM, for unsupported-encoding
// error paths.
inline void write_reference_wav_pcm24(const fs::path& path, int sample_rate, int frames) {
  std::vector<unsigned char> out;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(frames * 3);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  push_u32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  push_u32(out, 16);
  push_u16(out, 1);
  push_u16(out, 1);
  push_u32(out, static_cast<std::uint32_t>(sample_rate));
  push_u32(out, static_cast<std::uint32_t>(sample_rate * 3));
  push_u16(out, 3);
  push_u16(out, 24);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  push_u32(out, data_bytes);
  out.resize(out.size() + data_bytes, 0);
  std::ofstream f(path, std::ios::binary);
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

// ---- synthetic manifests ---------------------------------------------------

inline voxprep::QualityScore qscore(double mos, const std::string& scorer = "test") {
  voxprep::QualityScore s;
  s.mos = mos;
  s.scorer_id = scorer;
  return s;
}

inline voxprep::ClipRecord record(const std::string& id, const std::string& speaker,
                                  double duration_s, double mos_orig, double mos_enh) {
  voxprep::ClipRecord r;
  r.clip_id = id;
  r.speaker_id = speaker;
  r.original_path = "clips/" + id + ".wav";
  r.enhanced_path = "enhanced/" + id + ".wav";
  r.duration_s = duration_s;
  r.sentence = "sentence for " + id;
  r.score_original = qscore(mos_orig);
  r.score_enhanced = qscore(mos_enh);
  r.status = voxprep::ClipStatus::scored;
  return r;
}

// Fully scored corpus with varied demographics, durations and scores.
inline std::vector<voxprep::ClipRecord> synthetic_scored_corpus(Rng& rng, std::size_t n) {
  std::vector<voxprep::ClipRecord> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "clip_%05zu", i);
    const std::string speaker = "spk_" + std::to_string(rng.integer(40));
    const double duration = rng.uniform(2.0, 12.0);
    const double orig = rng.uniform(1.0, 5.0);
    const double enh = std::clamp(orig + rng.uniform(-0.2, 0.8), 1.0, 5.0);
    auto r = record(id, speaker, duration, orig, enh);
    const auto sex_draw = rng.integer(3);
    r.sex = sex_draw == 0 ? voxprep::Sex::female
                          : (sex_draw == 1 ? voxprep::Sex::male : voxprep::Sex::unknown);
    const auto age_draw = rng.integer(5);
    r.age_band = age_draw == 0   ? voxprep::AgeBand::twenties
                 : age_draw == 1 ? voxprep::AgeBand::thirties
                 : age_draw == 2 ? voxprep::AgeBand::fourties
                 : age_draw == 3 ? voxprep::AgeBand::fifties
                                 : voxprep::AgeBand::unknown;
    if (rng.integer(10) == 0) r.score_enhanced->utmos = rng.uniform(1.0, 5.0);
    records.push_back(std::move(r));
  }
  return records;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::string out((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return out;
}

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << content;
}

}  // namespace testutil
