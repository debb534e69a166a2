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

#include "voxprep/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "voxprep/scoring.hpp"
#include "voxprep/subprocess.hpp"
#include "voxprep/wav.hpp"

namespace voxprep {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void check_known_keys(const json& j, std::initializer_list<const char*> known,
                      const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) raise(Errc::bad_config, "unknown config key \"" + key + "\" in " + where);
  }
}

bool is_terminal(ClipStatus s, const PipelineConfig& config) {
  if (s == ClipStatus::pending) return false;
  // With scoring disabled the chain ends at "enhanced".
  if (s == ClipStatus::enhanced) return config.scorer_mode == ScorerMode::off;
  return true;
}

bool is_success(ClipStatus s, const PipelineConfig& config) {
  if (config.scorer_mode == ScorerMode::off) return s == ClipStatus::enhanced;
  return s == ClipStatus::scored;
}

// Stage timing accumulated per worker, merged once at worker exit.
struct StageTimer {
  std::map<std::string, double>* sink;
  std::mutex* mu;
  std::map<std::string, double> local;

  ~StageTimer() {
    std::lock_guard<std::mutex> lock(*mu);
    for (const auto& [k, v] : local) (*sink)[k] += v;
  }

  struct Scope {
    StageTimer* timer;
    const char* stage;
    Clock::time_point start = Clock::now();
    ~Scope() {
      timer->local[stage] += std::chrono::duration<double>(Clock::now() - start).count();
    }
  };
  Scope scope(const char* stage) { return Scope{this, stage}; }
};

struct CheckpointHeader {
  std::string manifest_hash;
  std::string config_hash;
};

class CheckpointWriter {
 public:
  CheckpointWriter(const std::filesystem::path& path, const CheckpointHeader& header,
                   std::uint64_t flush_every, bool append)
      : flush_every_(flush_every) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    file_.open(path, append ? std::ios::app : std::ios::trunc);
    if (!file_) raise(Errc::io_error, "cannot open checkpoint: " + path.string());
    if (!append) {
      ordered_json j;
      j["version"] = 1;
      j["manifest_hash"] = header.manifest_hash;
      j["config_hash"] = header.config_hash;
      file_ << j.dump() << '\n';
      file_.flush();
    }
  }

  void append_record(const ClipRecord& record) {
    std::lock_guard<std::mutex> lock(mu_);
    file_ << clip_record_to_json_line(record) << '\n';
    if (++since_flush_ >= flush_every_) {
      file_.flush();
      since_flush_ = 0;
    }
  }

  void close() {
    std::lock_guard<std::mutex> lock(mu_);
    file_.flush();
    file_.close();
  }

 private:
  std::ofstream file_;
  std::mutex mu_;
  std::uint64_t since_flush_ = 0;
  std::uint64_t flush_every_;
};

struct LoadedCheckpoint {
  CheckpointHeader header;
  std::vector<ClipRecord> records;
};

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) raise(Errc::bad_checkpoint, "cannot open checkpoint: " + path.string());

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(file, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) raise(Errc::bad_checkpoint, "empty checkpoint: " + path.string());

  LoadedCheckpoint out;
  const json header = json::parse(lines[0], nullptr, false);
  if (header.is_discarded() || !header.is_object() || header.value("version", 0) != 1) {
    raise(Errc::bad_checkpoint, "bad checkpoint header: " + path.string());
  }
  out.header.manifest_hash = header.value("manifest_hash", "");
  out.header.config_hash = header.value("config_hash", "");

  for (std::size_t i = 1; i < lines.size(); ++i) {
    try {
      out.records.push_back(clip_record_from_json_line(lines[i]));
    } catch (const std::exception&) {
      // A torn final line is expected after a crash; anything else is corruption.
      if (i + 1 == lines.size()) break;
      raise(Errc::bad_checkpoint,
            "corrupt checkpoint line " + std::to_string(i + 1) + ": " + path.string());
    }
  }
  return out;
}

std::filesystem::path resolve_audio_path(const PipelineConfig& config, const std::string& rel) {
  const std::filesystem::path p(rel);
  if (p.is_absolute() || config.audio_root.empty()) return p;
  return config.audio_root / p;
}

struct ClipOutcome {
  ClipRecord record;
};

// Runs one clip through the full stage chain. Never throws; failures land
// in the record's status/failure_detail.
ClipOutcome process_clip(ClipRecord record, const PipelineConfig& config,
                         const std::filesystem::path& work_dir, StageTimer& timer,
                         LineScorerClient* scorer) {
  ClipOutcome out;
  std::filesystem::path converted_file;

  // Reprocessing resets everything this run will recompute. A pre-existing
  // original score survives unless the scoring stage replaces it.
  record.status = ClipStatus::pending;
  record.failure_detail.clear();
  record.enhanced_path.clear();
  record.score_enhanced.reset();
  if (config.scorer_mode != ScorerMode::off && config.score_original) {
    record.score_original.reset();
  }

  try {
    const std::filesystem::path original = resolve_audio_path(config, record.original_path);
    std::filesystem::path decode_source = original;

    if (original.extension() != ".wav" && original.extension() != ".WAV") {
      if (config.converter_command.empty()) {
        record.status = ClipStatus::enhancement_failed;
        record.failure_detail = "no converter configured for " + original.extension().string();
        out.record = std::move(record);
        return out;
      }
      auto scope = timer.scope("convert");
      converted_file = work_dir / (record.clip_id + ".converted.wav");
      const HookResult converted = enhance_external(original, converted_file,
                                                    config.converter_command,
                                                    config.enhancer_timeout_s);
      if (converted.status != HookStatus::ok) {
        record.status = converted.status == HookStatus::timeout
                            ? ClipStatus::enhancement_timeout
                            : ClipStatus::enhancement_failed;
        record.failure_detail = "convert: " + converted.detail;
        out.record = std::move(record);
        return out;
      }
      decode_source = converted_file;
    }

    AudioClip working;
    {
      auto scope = timer.scope("decode");
      working = read_wav(decode_source);
      record.duration_s = working.duration_seconds();
    }

    if (config.enable_external_enhancer) {
      auto scope = timer.scope("enhance_external");
      const std::filesystem::path enhanced_file = work_dir / (record.clip_id + ".enhanced.wav");
      const std::filesystem::path log_file = work_dir / (record.clip_id + ".enhancer.log");
      const HookResult hook = enhance_external(decode_source, enhanced_file,
                                               config.enhancer_command,
                                               config.enhancer_timeout_s, log_file);
      if (hook.status != HookStatus::ok) {
        record.status = hook.status == HookStatus::timeout ? ClipStatus::enhancement_timeout
                                                           : ClipStatus::enhancement_failed;
        record.failure_detail = hook.detail;
        out.record = std::move(record);
        std::error_code ec;
        std::filesystem::remove(enhanced_file, ec);
        if (!converted_file.empty()) std::filesystem::remove(converted_file, ec);
        return out;
      }
      working = read_wav(enhanced_file);  // the enhancer's rate is preserved
      std::error_code ec;
      std::filesystem::remove(enhanced_file, ec);
      std::filesystem::remove(log_file, ec);
    }

    if (config.enable_subtraction) {
      NoiseProfile profile;
      {
        auto scope = timer.scope("noise_profile");
        profile = estimate_noise_profile(working, config.tail_s, config.subtract);
      }
      {
        auto scope = timer.scope("subtract");
        working = spectral_subtract(working, profile, config.subtract);
      }
    }

    if (config.enable_trim) {
      auto scope = timer.scope("trim");
      working = trim_and_pad(working, config.trim);
    }

    const std::string enhanced_rel = "enhanced/" + record.clip_id + ".wav";
    {
      auto scope = timer.scope("encode");
      write_wav(working, config.out_dir / enhanced_rel, config.output_format);
    }
    record.enhanced_path = enhanced_rel;
    record.status = ClipStatus::enhanced;

    if (config.scorer_mode != ScorerMode::off) {
      auto scope = timer.scope("score");
      const std::filesystem::path enhanced_abs =
          std::filesystem::absolute(config.out_dir / enhanced_rel);

      if (config.scorer_mode == ScorerMode::proxy) {
        record.score_enhanced = proxy_score(read_wav(enhanced_abs));
        if (config.score_original) {
          record.score_original = proxy_score(read_wav(decode_source));
        }
      } else {
        const auto enhanced_result = scorer->score_path(enhanced_abs.string());
        if (!enhanced_result.score) {
          record.status = ClipStatus::score_failed;
          record.failure_detail = "enhanced: " + enhanced_result.failure;
          out.record = std::move(record);
          if (!converted_file.empty()) {
            std::error_code ec;
            std::filesystem::remove(converted_file, ec);
          }
          return out;
        }
        record.score_enhanced = enhanced_result.score;
        if (config.score_original) {
          const auto original_result =
              scorer->score_path(std::filesystem::absolute(decode_source).string());
          if (!original_result.score) {
            record.status = ClipStatus::score_failed;
            record.failure_detail = "original: " + original_result.failure;
            out.record = std::move(record);
            if (!converted_file.empty()) {
              std::error_code ec;
              std::filesystem::remove(converted_file, ec);
            }
            return out;
          }
          record.score_original = original_result.score;
        }
      }
      record.status = ClipStatus::scored;
    }
  } catch (const Error& e) {
    record.status = e.code() == Errc::all_silent ? ClipStatus::all_silent
                                                 : ClipStatus::enhancement_failed;
    record.failure_detail = e.what();
  } catch (const std::exception& e) {
    record.status = ClipStatus::enhancement_failed;
    record.failure_detail = e.what();
  }

  if (!converted_file.empty()) {
    std::error_code ec;
    std::filesystem::remove(converted_file, ec);
  }
  out.record = std::move(record);
  return out;
}

RunReport execute(const PipelineConfig& config, bool resume) {
  validate(config);
  const auto t0 = Clock::now();

  std::vector<ClipRecord> records = load_any_manifest(config.manifest);
  std::sort(records.begin(), records.end(),
            [](const ClipRecord& a, const ClipRecord& b) { return a.clip_id < b.clip_id; });

  const std::filesystem::path checkpoint_path =
      config.checkpoint.empty() ? config.out_dir / "checkpoint.jsonl" : config.checkpoint;
  const CheckpointHeader header{manifest_content_hash(config.manifest),
                                config_determinism_hash(config)};

  std::unordered_map<std::string, ClipRecord> done;
  if (resume) {
    LoadedCheckpoint loaded = load_checkpoint(checkpoint_path);
    if (loaded.header.manifest_hash != header.manifest_hash) {
      raise(Errc::bad_checkpoint, "checkpoint was built from a different manifest (hash " +
                                      loaded.header.manifest_hash + " != " +
                                      header.manifest_hash + ")");
    }
    if (loaded.header.config_hash != header.config_hash) {
      raise(Errc::bad_checkpoint, "checkpoint was built with a different configuration");
    }
    for (auto& r : loaded.records) {
      if (is_terminal(r.status, config)) done.emplace(r.clip_id, std::move(r));
    }
    // Compact: rewrite the log without the torn tail, then append from there.
    const std::filesystem::path tmp = checkpoint_path.string() + ".tmp";
    {
      CheckpointWriter compact(tmp, header, /*flush_every=*/config.checkpoint_flush_every,
                               /*append=*/false);
      for (const auto& [id, r] : done) compact.append_record(r);
      compact.close();
    }
    std::filesystem::rename(tmp, checkpoint_path);
  }

  std::filesystem::create_directories(config.out_dir / "enhanced");
  const std::filesystem::path work_dir = config.out_dir / "work";
  std::filesystem::create_directories(work_dir);

  std::vector<const ClipRecord*> pending;
  for (const auto& r : records) {
    if (!done.count(r.clip_id)) pending.push_back(&r);
  }

  CheckpointWriter writer(checkpoint_path, header, config.checkpoint_flush_every,
                          /*append=*/resume);

  std::vector<std::optional<ClipRecord>> results(pending.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::uint64_t> finished{0};
  std::map<std::string, double> stage_seconds;
  std::mutex stage_mu;

  const int workers = std::min<int>(config.worker_count,
                                    std::max<std::size_t>(pending.size(), 1));
  auto worker_fn = [&]() {
    StageTimer timer{&stage_seconds, &stage_mu, {}};
    std::unique_ptr<LineScorerClient> scorer;
    if (config.scorer_mode == ScorerMode::external) {
      ExternalScorerOptions opts;
      opts.read_timeout_s = config.scorer_timeout_s;
      opts.scorer_id = config.scorer_id;
      scorer = std::make_unique<LineScorerClient>(config.scorer_command, opts);
    }
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) break;
      ClipOutcome outcome = process_clip(*pending[i], config, work_dir, timer, scorer.get());
      writer.append_record(outcome.record);
      results[i] = std::move(outcome.record);
      const std::uint64_t n = finished.fetch_add(1) + 1;
      if (config.progress_every > 0 && n % config.progress_every == 0) {
        std::fprintf(stderr, "[voxprep] %llu/%zu clips done\n",
                     static_cast<unsigned long long>(n), pending.size());
      }
    }
  };

  {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn);
    for (auto& t : pool) t.join();
  }
  writer.close();

  std::vector<ClipRecord> final_records;
  final_records.reserve(records.size());
  for (std::size_t i = 0; i < pending.size(); ++i) final_records.push_back(std::move(*results[i]));
  for (auto& [id, r] : done) final_records.push_back(std::move(r));

  save_manifest_jsonl(final_records, config.out_dir / "manifest.jsonl");

  RunReport report;
  report.clips_total = final_records.size();
  for (const auto& r : final_records) {
    if (is_success(r.status, config)) {
      ++report.clips_succeeded;
    } else {
      ++report.clips_failed_by_reason[to_string(r.status)];
    }
  }
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  report.throughput_files_per_s =
      report.wall_seconds > 0.0 ? static_cast<double>(report.clips_total) / report.wall_seconds
                                : 0.0;
  report.stage_seconds = stage_seconds;

  {
    std::ofstream rep(config.out_dir / "report.json", std::ios::trunc);
    rep << run_report_to_json(report) << '\n';
  }
  return report;
}

}  // namespace

std::string manifest_content_hash(const std::filesystem::path& manifest) {
  std::ifstream file(manifest, std::ios::binary);
  if (!file) raise(Errc::io_error, "cannot open manifest: " + manifest.string());
  std::uint64_t h = kFnvOffset;
  char buf[65536];
  while (file.read(buf, sizeof(buf)) || file.gcount() > 0) {
    h = fnv1a(buf, static_cast<std::size_t>(file.gcount()), h);
    if (file.eof()) break;
  }
  return to_hex(h);
}

std::string config_determinism_hash(const PipelineConfig& config) {
  ordered_json j;
  j["external_enhancer"] = config.enable_external_enhancer;
  j["subtraction"] = config.enable_subtraction;
  j["trim"] = config.enable_trim;
  j["scorer_mode"] = static_cast<int>(config.scorer_mode);
  j["score_original"] = config.score_original;
  j["enhancer_command"] = config.enhancer_command;
  j["converter_command"] = config.converter_command;
  j["scorer_command"] = config.scorer_command;
  j["scorer_id"] = config.scorer_id;
  j["enhancer_timeout_s"] = config.enhancer_timeout_s;
  j["scorer_timeout_s"] = config.scorer_timeout_s;
  j["tail_s"] = config.tail_s;
  j["subtract"] = {{"fft_size", config.subtract.fft_size},
                   {"hop", config.subtract.hop},
                   {"over_subtraction", config.subtract.over_subtraction},
                   {"spectral_floor", config.subtract.spectral_floor}};
  j["trim"] = {{"silence_threshold_db", config.trim.silence_threshold_db},
               {"min_silence_s", config.trim.min_silence_s},
               {"pad_s", config.trim.pad_s},
               {"detection_frame_s", config.trim.detection_frame_s}};
  j["output_format"] = config.output_format == WavFormat::pcm16 ? "pcm16" : "float32";
  const std::string dump = j.dump();
  return to_hex(fnv1a(dump.data(), dump.size(), kFnvOffset));
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) raise(Errc::bad_config, "cannot open config: " + path.string());
  json j;
  try {
    file >> j;
  } catch (const std::exception& e) {
    raise(Errc::bad_config, "config parse error: " + std::string(e.what()));
  }
  check_known_keys(j,
                   {"manifest", "audio_root", "out_dir", "checkpoint", "worker_count", "stages",
                    "scorer", "score_original", "enhancer", "converter", "subtract", "trim",
                    "tail_s", "output_format", "checkpoint_flush_every", "progress_every"},
                   "top level");

  PipelineConfig c;
  c.manifest = j.value("manifest", "");
  c.audio_root = j.value("audio_root", "");
  c.out_dir = j.value("out_dir", "");
  c.checkpoint = j.value("checkpoint", "");
  if (j.contains("worker_count")) {
    c.worker_count = j["worker_count"].get<int>();
  } else if (const char* env = std::getenv("VOXPREP_WORKERS"); env != nullptr) {
    // Default worker count when the config leaves it unset.
    c.worker_count = std::atoi(env);
  } else {
    c.worker_count = 1;
  }
  c.score_original = j.value("score_original", true);
  c.tail_s = j.value("tail_s", 0.5);
  c.checkpoint_flush_every = j.value("checkpoint_flush_every", 1);
  c.progress_every = j.value("progress_every", 100);

  if (j.contains("stages")) {
    const auto& s = j["stages"];
    check_known_keys(s, {"external_enhancer", "subtraction", "trim"}, "stages");
    c.enable_external_enhancer = s.value("external_enhancer", false);
    c.enable_subtraction = s.value("subtraction", true);
    c.enable_trim = s.value("trim", true);
  }
  if (j.contains("scorer")) {
    const auto& s = j["scorer"];
    check_known_keys(s, {"mode", "command", "id", "timeout_s"}, "scorer");
    const std::string mode = s.value("mode", "proxy");
    if (mode == "off") {
      c.scorer_mode = ScorerMode::off;
    } else if (mode == "proxy") {
      c.scorer_mode = ScorerMode::proxy;
    } else if (mode == "external") {
      c.scorer_mode = ScorerMode::external;
    } else {
      raise(Errc::bad_config, "scorer.mode must be off, proxy or external");
    }
    c.scorer_command = s.value("command", "");
    c.scorer_id = s.value("id", "external");
    c.scorer_timeout_s = s.value("timeout_s", 120.0);
  }
  if (j.contains("enhancer")) {
    const auto& s = j["enhancer"];
    check_known_keys(s, {"command", "timeout_s"}, "enhancer");
    c.enhancer_command = s.value("command", "");
    c.enhancer_timeout_s = s.value("timeout_s", 120.0);
  }
  if (j.contains("converter")) {
    const auto& s = j["converter"];
    check_known_keys(s, {"command"}, "converter");
    c.converter_command = s.value("command", "");
  }
  if (j.contains("subtract")) {
    const auto& s = j["subtract"];
    check_known_keys(s, {"fft_size", "hop", "over_subtraction", "spectral_floor"}, "subtract");
    c.subtract.fft_size = s.value("fft_size", 2048);
    c.subtract.hop = s.value("hop", c.subtract.fft_size / 4);
    c.subtract.over_subtraction = s.value("over_subtraction", 1.0);
    c.subtract.spectral_floor = s.value("spectral_floor", 0.02);
  }
  if (j.contains("trim")) {
    const auto& s = j["trim"];
    check_known_keys(s, {"silence_threshold_db", "min_silence_s", "pad_s", "detection_frame_s"},
                     "trim");
    c.trim.silence_threshold_db = s.value("silence_threshold_db", -55.0);
    c.trim.min_silence_s = s.value("min_silence_s", 0.1);
    c.trim.pad_s = s.value("pad_s", 0.1);
    c.trim.detection_frame_s = s.value("detection_frame_s", 0.01);
  }
  if (j.contains("output_format")) {
    const std::string f = j["output_format"].get<std::string>();
    if (f == "pcm16") {
      c.output_format = WavFormat::pcm16;
    } else if (f == "float32") {
      c.output_format = WavFormat::float32;
    } else {
      raise(Errc::bad_config, "output_format must be pcm16 or float32");
    }
  }
  return c;
}

void validate(const PipelineConfig& config) {
  if (config.manifest.empty()) raise(Errc::bad_config, "config: manifest path is required");
  if (config.out_dir.empty()) raise(Errc::bad_config, "config: out_dir is required");
  if (config.worker_count < 1) raise(Errc::bad_config, "config: worker_count must be >= 1");
  if (config.tail_s <= 0.0) raise(Errc::bad_config, "config: tail_s must be > 0");
  if (config.enhancer_timeout_s <= 0.0 || config.scorer_timeout_s <= 0.0) {
    raise(Errc::bad_config, "config: timeouts must be > 0");
  }
  if (config.enable_external_enhancer && config.enhancer_command.empty()) {
    raise(Errc::bad_config, "config: external enhancer enabled without a command");
  }
  if (config.scorer_mode == ScorerMode::external && config.scorer_command.empty()) {
    raise(Errc::bad_config, "config: external scorer selected without a command");
  }
  if (config.checkpoint_flush_every < 1) {
    raise(Errc::bad_config, "config: checkpoint_flush_every must be >= 1");
  }
  validate(config.subtract);
  validate(config.trim);
}

std::uint64_t RunReport::clips_failed() const {
  std::uint64_t n = 0;
  for (const auto& [reason, count] : clips_failed_by_reason) n += count;
  return n;
}

std::string run_report_to_json(const RunReport& report) {
  ordered_json j;
  j["clips_total"] = report.clips_total;
  j["clips_succeeded"] = report.clips_succeeded;
  j["clips_failed_by_reason"] = report.clips_failed_by_reason;
  j["wall_seconds"] = report.wall_seconds;
  j["throughput_files_per_s"] = report.throughput_files_per_s;
  j["stage_seconds"] = report.stage_seconds;
  return j.dump(2);
}

std::string run_report_to_text(const RunReport& report) {
  std::ostringstream out;
  out << "clips total:      " << report.clips_total << '\n';
  out << "clips succeeded:  " << report.clips_succeeded << '\n';
  out << "clips failed:     " << report.clips_failed() << '\n';
  for (const auto& [reason, count] : report.clips_failed_by_reason) {
    out << "  " << reason << ": " << count << '\n';
  }
  char line[128];
  std::snprintf(line, sizeof(line), "wall seconds:     %.3f\n", report.wall_seconds);
  out << line;
  std::snprintf(line, sizeof(line), "throughput:       %.2f files/s\n",
                report.throughput_files_per_s);
  out << line;
  for (const auto& [stage, seconds] : report.stage_seconds) {
    std::snprintf(line, sizeof(line), "  stage %-16s %.3f s\n", (stage + ":").c_str(), seconds);
    out << line;
  }
  return out.str();
}

RunReport run_pipeline(const PipelineConfig& config) { return execute(config, /*resume=*/false); }

RunReport resume_pipeline(const PipelineConfig& config) { return execute(config, /*resume=*/true); }

}  // namespace voxprep
