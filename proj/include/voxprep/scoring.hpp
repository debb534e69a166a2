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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "voxprep/audio.hpp"
#include "voxprep/subprocess.hpp"

namespace voxprep {

// Pseudo-MOS plus the optional per-dimension values a scorer may provide.
// Every present value lies in [1, 5].
struct QualityScore {
  double mos = 0.0;
  std::optional<double> noisiness;
  std::optional<double> coloration;
  std::optional<double> discontinuity;
  std::optional<double> loudness;
  std::optional<double> utmos;
  std::string scorer_id;
};

bool score_in_range(const QualityScore& s);

// Deterministic DSP stand-in scorer. The value combines three cheap signal
// statistics: a speech-to-noise ratio estimated from the trailing segment
// (the corpus convention treats the clip tail as non-speech), the fraction
// of near-full-scale samples, and the silent-frame fraction. The composite
// goes through a logistic map onto [1, 5]. Its numbers are NOT comparable
// to any neural quality model; they exist so curation logic can run and be
// tested without one. Constants below are fixed on purpose.
inline constexpr char kProxyScorerId[] = "dsp-proxy/1";
inline constexpr double kProxyTailSeconds = 0.5;
inline constexpr double kProxySilenceThresholdDb = -55.0;
inline constexpr double kProxyFrameSeconds = 0.01;
inline constexpr double kProxySnrCenterDb = 18.0;
inline constexpr double kProxySnrScaleDb = 6.0;
inline constexpr double kProxySnrCapDb = 60.0;
inline constexpr double kProxyClipWeight = 25.0;
inline constexpr double kProxySilenceWeight = 2.0;
inline constexpr double kProxyClipLevel = 0.999;

// All-silent clips score mos = 1.0 by definition.
QualityScore proxy_score(const AudioClip& clip);

struct ScoreBatchResult {
  std::map<std::string, QualityScore> scores;
  std::map<std::string, std::string> failures;  // path -> reason
  std::uint64_t malformed_lines = 0;
};

struct ExternalScorerOptions {
  double read_timeout_s = 120.0;  // per result line
  std::string scorer_id = "external";
  std::filesystem::path stderr_log;
};

// Batch protocol (v1): one input path per line on the child's stdin, then
// stdin closes; the child answers one JSON object per line on stdout:
//   {"path": ..., "mos": ..., "noi": ..., "col": ..., "dis": ..., "loud": ..., "utmos": ...}
// mos is required, the rest are optional; matching is by path, order-free.
// Blank lines and lines starting with '#' are ignored. A crashed child gets
// the still-unanswered paths replayed once in a fresh process.
ScoreBatchResult run_external_scorer(const std::vector<std::string>& paths,
                                     const std::string& command,
                                     const ExternalScorerOptions& opts = {});

// Same line protocol against a persistent child, one request in flight at a
// time. Used by pipeline workers so model startup is paid once per worker.
class LineScorerClient {
 public:
  LineScorerClient(std::string command, ExternalScorerOptions opts);
  ~LineScorerClient();

  struct Result {
    std::optional<QualityScore> score;
    std::string failure;  // set when score is absent
  };

  Result score_path(const std::string& path);

 private:
  Result request_once(const std::string& path);
  void ensure_spawned();
  void drop_process();

  std::string command_;
  ExternalScorerOptions opts_;
  std::unique_ptr<LineProcess> process_;
};

// Parses and validates one protocol line. Returns false with *error set on
// malformed records; out-of-range values are rejected here so they never
// reach a manifest.
bool parse_scorer_line(const std::string& line, const std::string& scorer_id,
                       std::string* path, QualityScore* score, std::string* error);

}  // namespace voxprep
