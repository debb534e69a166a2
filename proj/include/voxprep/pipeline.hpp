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
#include <map>
#include <string>

#include "voxprep/enhance.hpp"
#include "voxprep/manifest.hpp"
#include "voxprep/wav.hpp"

namespace voxprep {

enum class ScorerMode { off, proxy, external };

// Everything a run needs, loadable from a JSON config file. Outputs are a
// pure function of (config, input files): worker_count and checkpoint
// cadence never change the produced bytes.
struct PipelineConfig {
  std::filesystem::path manifest;       // .tsv (Commonvoice) or .jsonl (run manifest)
  std::filesystem::path audio_root;     // original paths resolve against this
  std::filesystem::path out_dir;
  std::filesystem::path checkpoint;     // default: out_dir / "checkpoint.jsonl"

  int worker_count = 1;

  bool enable_external_enhancer = false;
  bool enable_subtraction = true;
  bool enable_trim = true;
  ScorerMode scorer_mode = ScorerMode::proxy;
  bool score_original = true;  // also score the untouched input when scoring

  std::string enhancer_command;   // {input}/{output} placeholders
  std::string converter_command;  // optional non-WAV ingest hook, {input}/{output}
  std::string scorer_command;     // line-protocol scorer
  std::string scorer_id = "external";

  double enhancer_timeout_s = 120.0;
  double scorer_timeout_s = 120.0;
  double tail_s = 0.5;

  SubtractParams subtract;
  TrimParams trim;
  WavFormat output_format = WavFormat::pcm16;

  std::uint64_t checkpoint_flush_every = 1;
  std::uint64_t progress_every = 100;
};

PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void validate(const PipelineConfig& config);

struct RunReport {
  std::uint64_t clips_total = 0;
  std::uint64_t clips_succeeded = 0;
  std::map<std::string, std::uint64_t> clips_failed_by_reason;
  double wall_seconds = 0.0;
  double throughput_files_per_s = 0.0;
  std::map<std::string, double> stage_seconds;  // cumulative across workers

  std::uint64_t clips_failed() const;
};

std::string run_report_to_json(const RunReport& report);
std::string run_report_to_text(const RunReport& report);

// Drives every manifest clip to a terminal status across the stage chain
// decode -> (external enhance) -> noise profile -> subtract -> trim/pad ->
// encode -> score, then writes out_dir/manifest.jsonl ordered by clip_id
// plus out_dir/report.json. Individual clip failures never abort the run.
RunReport run_pipeline(const PipelineConfig& config);

// Continues from the checkpoint's terminal clips; refuses to run when the
// checkpoint does not match the manifest/config (hash check). Final outputs
// equal an uninterrupted run's bytes.
RunReport resume_pipeline(const PipelineConfig& config);

// Exposed for tests: content hash of the manifest file and of the
// determinism-relevant config fields, as stored in checkpoint headers.
std::string manifest_content_hash(const std::filesystem::path& manifest);
std::string config_determinism_hash(const PipelineConfig& config);

}  // namespace voxprep
