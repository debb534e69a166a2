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

#include "voxprep/scoring.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace voxprep {
namespace {

using json = nlohmann::json;

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double clamp_score(double v) { return std::clamp(v, 1.0, 5.0); }

bool in_range(double v) { return std::isfinite(v) && v >= 1.0 && v <= 5.0; }

bool read_optional_field(const json& j, const char* key, std::optional<double>* out,
                         std::string* error) {
  if (!j.contains(key) || j[key].is_null()) {
    out->reset();
    return true;
  }
  if (!j[key].is_number()) {
    *error = std::string(key) + " is not a number";
    return false;
  }
  const double v = j[key].get<double>();
  if (!in_range(v)) {
    *error = std::string(key) + " out of range: " + std::to_string(v);
    return false;
  }
  *out = v;
  return true;
}

}  // namespace

bool score_in_range(const QualityScore& s) {
  if (!in_range(s.mos)) return false;
  for (const auto& v : {s.noisiness, s.coloration, s.discontinuity, s.loudness, s.utmos}) {
    if (v && !in_range(*v)) return false;
  }
  return !s.scorer_id.empty();
}

QualityScore proxy_score(const AudioClip& clip) {
  if (clip.samples.size() == 0) raise(Errc::empty_audio, "proxy_score: empty clip");

  QualityScore score;
  score.scorer_id = kProxyScorerId;

  const auto levels = frame_levels(clip, kProxyFrameSeconds, kProxySilenceThresholdDb);
  const Eigen::Index frame_len = frame_sample_count(clip.sample_rate, kProxyFrameSeconds);

  double speech_power = 0.0;
  Eigen::Index speech_samples = 0;
  std::size_t silent_frames = 0;
  for (const auto& level : levels) {
    const Eigen::Index start = level.frame_index * frame_len;
    const Eigen::Index len = std::min(frame_len, clip.samples.size() - start);
    if (level.is_silent) {
      ++silent_frames;
      continue;
    }
    speech_power += clip.samples.segment(start, len).square().sum();
    speech_samples += len;
  }

  if (speech_samples == 0) {
    score.mos = 1.0;  // entirely silent
    return score;
  }
  speech_power /= static_cast<double>(speech_samples);

  const Eigen::Index tail_len = std::min<Eigen::Index>(
      clip.samples.size(),
      static_cast<Eigen::Index>(std::llround(kProxyTailSeconds * clip.sample_rate)));
  const double noise_power = clip.samples.tail(tail_len).square().mean();

  double snr_db = kProxySnrCapDb;
  if (noise_power > 0.0) {
    snr_db = std::clamp(10.0 * std::log10(speech_power / noise_power), -kProxySnrCapDb,
                        kProxySnrCapDb);
  }

  const double clip_ratio =
      static_cast<double>((clip.samples.abs() >= kProxyClipLevel).count()) /
      static_cast<double>(clip.samples.size());
  const double silence_fraction =
      static_cast<double>(silent_frames) / static_cast<double>(levels.size());

  const double z = (snr_db - kProxySnrCenterDb) / kProxySnrScaleDb -
                   kProxyClipWeight * clip_ratio - kProxySilenceWeight * silence_fraction;
  score.mos = clamp_score(1.0 + 4.0 * logistic(z));

  const double speech_db = 10.0 * std::log10(speech_power);
  score.noisiness = clamp_score(1.0 + 4.0 * logistic((snr_db - 10.0) / 8.0));
  score.loudness = clamp_score(1.0 + 4.0 * logistic((speech_db + 36.0) / 7.0));
  return score;
}

bool parse_scorer_line(const std::string& line, const std::string& scorer_id, std::string* path,
                       QualityScore* score, std::string* error) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    *error = "not a JSON object";
    return false;
  }
  if (!j.contains("path") || !j["path"].is_string()) {
    *error = "missing path";
    return false;
  }
  *path = j["path"].get<std::string>();
  if (!j.contains("mos") || !j["mos"].is_number()) {
    *error = "missing mos";
    return false;
  }
  const double mos = j["mos"].get<double>();
  if (!in_range(mos)) {
    *error = "mos out of range: " + std::to_string(mos);
    return false;
  }
  QualityScore s;
  s.mos = mos;
  s.scorer_id = j.contains("scorer") && j["scorer"].is_string()
                    ? j["scorer"].get<std::string>()
                    : scorer_id;
  if (!read_optional_field(j, "noi", &s.noisiness, error)) return false;
  if (!read_optional_field(j, "col", &s.coloration, error)) return false;
  if (!read_optional_field(j, "dis", &s.discontinuity, error)) return false;
  if (!read_optional_field(j, "loud", &s.loudness, error)) return false;
  if (!read_optional_field(j, "utmos", &s.utmos, error)) return false;
  *score = std::move(s);
  return true;
}

namespace {

// One feed-and-drain pass over a fresh child process.
struct BatchPass {
  bool crashed = false;
  std::set<std::string> answered;
};

BatchPass run_batch_once(const std::vector<std::string>& paths, const std::string& command,
                         const ExternalScorerOptions& opts, ScoreBatchResult* result) {
  BatchPass pass;
  LineProcess process(command, opts.stderr_log);

  for (const auto& path : paths) {
    if (!process.write_line(path)) {
      pass.crashed = true;
      break;
    }
  }
  process.close_stdin();

  std::string line;
  while (pass.answered.size() < paths.size()) {
    const auto status = process.read_line(&line, opts.read_timeout_s);
    if (status == LineProcess::ReadStatus::eof) break;
    if (status == LineProcess::ReadStatus::timeout) {
      pass.crashed = true;
      process.kill_now();
      break;
    }
    if (line.empty() || line[0] == '#') continue;

    std::string path;
    QualityScore score;
    std::string error;
    if (!parse_scorer_line(line, opts.scorer_id, &path, &score, &error)) {
      ++result->malformed_lines;
      if (!path.empty() && !pass.answered.count(path)) {
        pass.answered.insert(path);
        result->failures[path] = error;
      }
      continue;
    }
    if (pass.answered.count(path)) continue;  // first answer wins
    pass.answered.insert(path);
    result->scores[path] = std::move(score);
  }

  const int exit_code = process.wait(5.0);
  if (exit_code != 0) pass.crashed = true;
  return pass;
}

}  // namespace

ScoreBatchResult run_external_scorer(const std::vector<std::string>& paths,
                                     const std::string& command,
                                     const ExternalScorerOptions& opts) {
  if (command.empty()) raise(Errc::bad_config, "external scorer: empty command");
  ScoreBatchResult result;
  if (paths.empty()) return result;

  const BatchPass first = run_batch_once(paths, command, opts, &result);

  std::vector<std::string> missing;
  for (const auto& path : paths) {
    if (!first.answered.count(path)) missing.push_back(path);
  }
  if (!missing.empty() && first.crashed) {
    // One replay of the unanswered remainder in a fresh process.
    const BatchPass second = run_batch_once(missing, command, opts, &result);
    std::vector<std::string> still_missing;
    for (const auto& path : missing) {
      if (!second.answered.count(path)) still_missing.push_back(path);
    }
    missing = std::move(still_missing);
    for (const auto& path : missing) {
      result.failures.emplace(path, "scorer crashed twice without a result");
    }
  } else {
    for (const auto& path : missing) {
      result.failures.emplace(path, "no result from scorer");
    }
  }
  return result;
}

LineScorerClient::LineScorerClient(std::string command, ExternalScorerOptions opts)
    : command_(std::move(command)), opts_(std::move(opts)) {
  if (command_.empty()) raise(Errc::bad_config, "external scorer: empty command");
}

LineScorerClient::~LineScorerClient() = default;

void LineScorerClient::ensure_spawned() {
  if (!process_) process_ = std::make_unique<LineProcess>(command_, opts_.stderr_log);
}

void LineScorerClient::drop_process() {
  if (process_) {
    process_->kill_now();
    process_->wait(1.0);
    process_.reset();
  }
}

LineScorerClient::Result LineScorerClient::request_once(const std::string& path) {
  Result out;
  ensure_spawned();
  if (!process_->write_line(path)) {
    out.failure = "scorer process not accepting input";
    drop_process();
    return out;
  }
  std::string line;
  for (;;) {
    const auto status = process_->read_line(&line, opts_.read_timeout_s);
    if (status == LineProcess::ReadStatus::eof) {
      out.failure = "scorer process exited";
      drop_process();
      return out;
    }
    if (status == LineProcess::ReadStatus::timeout) {
      out.failure = "scorer timed out";
      drop_process();
      return out;
    }
    if (line.empty() || line[0] == '#') continue;

    std::string got_path;
    QualityScore score;
    std::string error;
    if (!parse_scorer_line(line, opts_.scorer_id, &got_path, &score, &error)) {
      out.failure = error;
      return out;
    }
    if (got_path != path) continue;  // stale answer from a previous request
    out.score = std::move(score);
    return out;
  }
}

LineScorerClient::Result LineScorerClient::score_path(const std::string& path) {
  Result first = request_once(path);
  if (first.score || first.failure.empty()) return first;
  // Transport-level failures get one respawn; a well-formed rejection
  // (malformed record, range error) does not.
  if (first.failure == "scorer process exited" || first.failure == "scorer timed out" ||
      first.failure == "scorer process not accepting input") {
    Result second = request_once(path);
    if (!second.score && !second.failure.empty()) {
      second.failure += " (after retry)";
    }
    return second;
  }
  return first;
}

}  // namespace voxprep
