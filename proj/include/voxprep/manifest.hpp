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
#include <vector>

#include "voxprep/curation.hpp"

namespace voxprep {

// Commonvoice-style TSV: header must include client_id, path and sentence;
// age and gender are optional and lenient. clip_id is the path's stem and
// must be unique.
std::vector<ClipRecord> load_manifest_tsv(const std::filesystem::path& tsv_path);

// Sidecar durations file: TSV of (path or clip_id, duration seconds).
void load_durations(std::vector<ClipRecord>& records, const std::filesystem::path& durations_path);

// Fills missing durations by probing WAV headers under audio_root.
// Returns the number of clips probed.
std::size_t fill_durations(std::vector<ClipRecord>& records, const std::filesystem::path& audio_root);

// Run manifest: one JSON object per line, one line per clip, sorted by
// clip_id. Serialization is canonical (fixed key order, shortest float
// round-trip) so identical runs produce identical bytes.
void save_manifest_jsonl(const std::vector<ClipRecord>& records, const std::filesystem::path& path);
std::vector<ClipRecord> load_manifest_jsonl(const std::filesystem::path& path);

// Detects by extension: .tsv -> Commonvoice TSV, .jsonl -> run manifest.
std::vector<ClipRecord> load_any_manifest(const std::filesystem::path& path);

std::string clip_record_to_json_line(const ClipRecord& r);
ClipRecord clip_record_from_json_line(const std::string& line);

// Subset list consumable by common TTS training loaders:
// path <TAB> speaker_id <TAB> sentence, with a header row.
void save_subset_tsv(const Subset& subset, const std::filesystem::path& path);
void save_subset_spec_json(const Subset& subset, const std::filesystem::path& path);

void save_curve_csv(const ThresholdCurve& curve, const std::filesystem::path& path);
void save_stats_csv(const StatsTable& table, const std::string& key_column,
                    const std::filesystem::path& path);
void save_mean_delta_csv(const MeanDelta& delta, const std::filesystem::path& path);
void save_histogram_csv(const std::vector<HistogramBin>& bins, const std::filesystem::path& path);

// Minimal static line/bar charts for the curve and histogram outputs.
void save_curve_svg(const ThresholdCurve& curve, const std::filesystem::path& path);
void save_histogram_svg(const std::vector<HistogramBin>& bins, const std::filesystem::path& path);

// Shortest round-trip decimal form, used by every CSV writer so output
// bytes are reproducible.
std::string format_double(double v);

}  // namespace voxprep
