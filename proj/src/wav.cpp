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

#include "voxprep/wav.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

namespace voxprep {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatIeeeFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct FmtChunk {
  std::uint16_t format_tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits_per_sample = 0;
  bool seen = false;
};

template <typename T>
T read_le(const unsigned char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;  // little-endian host assumed
}

struct ChunkWalker {
  std::ifstream file;
  std::filesystem::path path;
  std::uint64_t file_size = 0;

  explicit ChunkWalker(const std::filesystem::path& p) : path(p) {
    file.open(p, std::ios::binary);
    if (!file) raise(Errc::unreadable_file, "cannot open " + p.string());
    file.seekg(0, std::ios::end);
    file_size = static_cast<std::uint64_t>(file.tellg());
    file.seekg(0);

    unsigned char riff[12];
    if (!file.read(reinterpret_cast<char*>(riff), 12) || std::memcmp(riff, "RIFF", 4) != 0 ||
        std::memcmp(riff + 8, "WAVE", 4) != 0) {
      raise(Errc::unreadable_file, "not a RIFF/WAVE file: " + p.string());
    }
  }

  // Returns false at end of file; on true, the stream is positioned at the
  // chunk payload.
  bool next(char id[4], std::uint32_t* size) {
    unsigned char header[8];
    if (!file.read(reinterpret_cast<char*>(header), 8)) return false;
    std::memcpy(id, header, 4);
    *size = read_le<std::uint32_t>(header + 4);
    return true;
  }

  void skip(std::uint32_t size) {
    file.seekg(size + (size & 1), std::ios::cur);  // chunks are word-aligned
  }
};

FmtChunk parse_fmt(const std::vector<unsigned char>& payload, const std::filesystem::path& path) {
  if (payload.size() < 16) raise(Errc::unreadable_file, "truncated fmt chunk: " + path.string());
  FmtChunk fmt;
  fmt.format_tag = read_le<std::uint16_t>(payload.data());
  fmt.channels = read_le<std::uint16_t>(payload.data() + 2);
  fmt.sample_rate = read_le<std::uint32_t>(payload.data() + 4);
  fmt.block_align = read_le<std::uint16_t>(payload.data() + 12);
  fmt.bits_per_sample = read_le<std::uint16_t>(payload.data() + 14);
  if (fmt.format_tag == kFormatExtensible) {
    // cbSize(2) + valid bits(2) + channel mask(4) + GUID, whose first two
    // bytes are the actual format tag.
    if (payload.size() < 26) {
      raise(Errc::unreadable_file, "truncated extensible fmt chunk: " + path.string());
    }
    fmt.format_tag = read_le<std::uint16_t>(payload.data() + 24);
  }
  fmt.seen = true;
  return fmt;
}

WavFormat check_supported(const FmtChunk& fmt, const std::filesystem::path& path) {
  if (fmt.format_tag == kFormatPcm && fmt.bits_per_sample == 16) return WavFormat::pcm16;
  if (fmt.format_tag == kFormatIeeeFloat && fmt.bits_per_sample == 32) return WavFormat::float32;
  raise(Errc::unsupported_encoding,
        "unsupported WAV encoding (format tag " + std::to_string(fmt.format_tag) + ", " +
            std::to_string(fmt.bits_per_sample) + " bits) in " + path.string());
}

void check_header_sanity(const FmtChunk& fmt, const std::filesystem::path& path) {
  if (fmt.channels == 0 || fmt.sample_rate == 0 || fmt.block_align == 0) {
    raise(Errc::unreadable_file, "invalid fmt chunk in " + path.string());
  }
}

}  // namespace

AudioClip read_wav(const std::filesystem::path& path) {
  ChunkWalker walker(path);
  FmtChunk fmt;
  WavFormat format = WavFormat::pcm16;
  std::vector<unsigned char> data;
  bool data_seen = false;

  char id[4];
  std::uint32_t size = 0;
  while (walker.next(id, &size)) {
    if (std::memcmp(id, "fmt ", 4) == 0) {
      std::vector<unsigned char> payload(size);
      if (!walker.file.read(reinterpret_cast<char*>(payload.data()), size)) {
        raise(Errc::unreadable_file, "truncated fmt chunk: " + path.string());
      }
      if (size & 1) walker.file.seekg(1, std::ios::cur);
      fmt = parse_fmt(payload, path);
      check_header_sanity(fmt, path);
      format = check_supported(fmt, path);
    } else if (std::memcmp(id, "data", 4) == 0) {
      if (!fmt.seen) raise(Errc::unreadable_file, "data chunk before fmt: " + path.string());
      data.resize(size);
      if (size > 0 && !walker.file.read(reinterpret_cast<char*>(data.data()), size)) {
        raise(Errc::unreadable_file, "truncated data chunk: " + path.string());
      }
      data_seen = true;
      break;
    } else {
      walker.skip(size);
    }
  }
  if (!fmt.seen || !data_seen) {
    raise(Errc::unreadable_file, "missing fmt or data chunk: " + path.string());
  }

  const std::size_t bytes_per_sample = fmt.bits_per_sample / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
  const std::size_t frames = data.size() / frame_bytes;
  if (frames == 0) raise(Errc::empty_audio, "zero-length audio: " + path.string());

  AudioClip clip;
  clip.sample_rate = static_cast<int>(fmt.sample_rate);
  clip.samples.resize(static_cast<Eigen::Index>(frames));

  const double channel_scale = 1.0 / fmt.channels;
  for (std::size_t f = 0; f < frames; ++f) {
    const unsigned char* p = data.data() + f * frame_bytes;
    double acc = 0.0;
    for (unsigned c = 0; c < fmt.channels; ++c, p += bytes_per_sample) {
      if (format == WavFormat::pcm16) {
        acc += read_le<std::int16_t>(p) / 32768.0;
      } else {
        const float v = read_le<float>(p);
        if (!std::isfinite(v)) {
          raise(Errc::unreadable_file, "non-finite sample in " + path.string());
        }
        acc += std::clamp(static_cast<double>(v), -1.0, 1.0);
      }
    }
    clip.samples[static_cast<Eigen::Index>(f)] = acc * channel_scale;
  }
  return clip;
}

namespace {

void append_le16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(v & 0xFF);
  out.push_back((v >> 8) & 0xFF);
}

void append_le32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(v & 0xFF);
  out.push_back((v >> 8) & 0xFF);
  out.push_back((v >> 16) & 0xFF);
  out.push_back((v >> 24) & 0xFF);
}

}  // namespace

WavWriteStats write_wav(const AudioClip& clip, const std::filesystem::path& path,
                        WavFormat format) {
  if (clip.samples.size() == 0) {
    raise(Errc::empty_audio, "refusing to write empty clip: " + path.string());
  }
  if (clip.sample_rate <= 0) {
    raise(Errc::invalid_argument, "invalid sample rate for " + path.string());
  }

  WavWriteStats stats;
  const std::uint16_t bytes_per_sample = format == WavFormat::pcm16 ? 2 : 4;
  const std::uint64_t n = static_cast<std::uint64_t>(clip.samples.size());
  const std::uint64_t data_bytes = n * bytes_per_sample;
  if (data_bytes > std::numeric_limits<std::uint32_t>::max() - 44) {
    raise(Errc::invalid_argument, "clip too long for a RIFF file: " + path.string());
  }

  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  append_le32(out, static_cast<std::uint32_t>(36 + data_bytes));
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  append_le32(out, 16);
  append_le16(out, format == WavFormat::pcm16 ? kFormatPcm : kFormatIeeeFloat);
  append_le16(out, 1);  // mono by construction
  append_le32(out, static_cast<std::uint32_t>(clip.sample_rate));
  append_le32(out, static_cast<std::uint32_t>(clip.sample_rate) * bytes_per_sample);
  append_le16(out, bytes_per_sample);
  append_le16(out, bytes_per_sample * 8);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  append_le32(out, static_cast<std::uint32_t>(data_bytes));

  for (Eigen::Index i = 0; i < clip.samples.size(); ++i) {
    double v = clip.samples[i];
    if (!std::isfinite(v)) {
      raise(Errc::invalid_argument, "non-finite sample at index " + std::to_string(i));
    }
    if (v < -1.0 || v > 1.0) {
      ++stats.clamped_samples;
      v = std::clamp(v, -1.0, 1.0);
    }
    if (format == WavFormat::pcm16) {
      const long q = std::lrint(v * 32768.0);
      const std::int16_t s = static_cast<std::int16_t>(std::clamp<long>(q, -32768, 32767));
      append_le16(out, static_cast<std::uint16_t>(s));
    } else {
      const float f = static_cast<float>(v);
      std::uint32_t bits;
      std::memcpy(&bits, &f, 4);
      append_le32(out, bits);
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) raise(Errc::io_error, "cannot open for writing: " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  file.flush();
  if (!file) raise(Errc::io_error, "write failed: " + path.string());
  return stats;
}

WavInfo probe_wav(const std::filesystem::path& path) {
  ChunkWalker walker(path);
  FmtChunk fmt;
  WavInfo info;
  bool data_seen = false;

  char id[4];
  std::uint32_t size = 0;
  while (walker.next(id, &size)) {
    if (std::memcmp(id, "fmt ", 4) == 0) {
      std::vector<unsigned char> payload(size);
      if (!walker.file.read(reinterpret_cast<char*>(payload.data()), size)) {
        raise(Errc::unreadable_file, "truncated fmt chunk: " + path.string());
      }
      if (size & 1) walker.file.seekg(1, std::ios::cur);
      fmt = parse_fmt(payload, path);
      check_header_sanity(fmt, path);
      info.format = check_supported(fmt, path);
    } else if (std::memcmp(id, "data", 4) == 0) {
      if (!fmt.seen) raise(Errc::unreadable_file, "data chunk before fmt: " + path.string());
      info.frames = size / fmt.block_align;
      data_seen = true;
      break;
    } else {
      walker.skip(size);
    }
  }
  if (!fmt.seen || !data_seen) {
    raise(Errc::unreadable_file, "missing fmt or data chunk: " + path.string());
  }
  info.sample_rate = static_cast<int>(fmt.sample_rate);
  info.channels = fmt.channels;
  info.duration_s = static_cast<double>(info.frames) / info.sample_rate;
  return info;
}

}  // namespace voxprep
