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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "voxprep/scoring.hpp"

namespace voxprep {

enum class Sex { female, male, unknown };
enum class AgeBand {
  teens, twenties, thirties, fourties, fifties,
  sixties, seventies, eighties, nineties, unknown,
};
enum class ClipStatus {
  pending, enhanced, enhancement_failed, enhancement_timeout,
  all_silent, scored, score_failed,
};

const char* to_string(Sex s);
const char* to_string(AgeBand b);
const char* to_string(ClipStatus s);
Sex sex_from_string(const std::string& s);          // lenient, unknown fallback
AgeBand age_band_from_string(const std::string& s);  // lenient, unknown fallback
ClipStatus clip_status_from_string(const std::string& s);  // strict

// One manifest row. enhanced_path is relative to the manifest's directory
// so run outputs stay byte-identical across output locations.
struct ClipRecord {
  std::string clip_id;
  std::string speaker_id;
  std::string original_path;
  std::string enhanced_path;  // empty until the pipeline produced one
  double duration_s = 0.0;
  Sex sex = Sex::unknown;
  AgeBand age_band = AgeBand::unknown;
  std::string sentence;
  std::optional<QualityScore> score_original;
  std::optional<QualityScore> score_enhanced;
  ClipStatus status = ClipStatus::pending;
  std::string failure_detail;  // reason for a failed terminal status
};

// Which scored number a curation operation reads from a record. Parsed from
// strings like "nisqa_mos", "utmos" or "original.noisiness"; the unprefixed
// side is the enhanced score.
struct MetricField {
  enum class Side { original, enhanced };
  enum class Field { mos, noisiness, coloration, discontinuity, loudness, utmos };

  Side side = Side::enhanced;
  Field field = Field::mos;

  static MetricField parse(const std::string& name);
  std::string name() const;
  std::optional<double> value(const ClipRecord& r) const;
};

struct ThresholdCurve {
  std::string metric;
  std::vector<std::pair<double, double>> points;  // (threshold, hours), thresholds increasing
};

struct SubsetSpec {
  enum class Mode { by_threshold, by_hours };
  Mode mode = Mode::by_threshold;
  std::string metric;
  double threshold = 0.0;      // by_threshold input
  double target_hours = 0.0;   // by_hours input
  double realized_hours = 0.0;
  double realized_threshold = 0.0;
};

// Which path column a subset refers to: selections point at enhanced audio,
// control subsets at the untouched originals.
enum class PathSide { original, enhanced };

struct Subset {
  SubsetSpec spec;
  PathSide side = PathSide::enhanced;
  std::vector<ClipRecord> records;  // ordered by clip_id
};

// Keeps exactly the clips whose speaker's summed duration is strictly above
// min_total_s.
std::vector<ClipRecord> filter_speakers(const std::vector<ClipRecord>& records,
                                        double min_total_s = 1400.0);

// hours(t) = total duration of records with metric >= t, per grid point.
// Grid must be strictly increasing; unscored records are an error.
ThresholdCurve threshold_curve(const std::vector<ClipRecord>& records, const MetricField& metric,
                               const std::vector<double>& grid);

Subset select_by_threshold(const std::vector<ClipRecord>& records, const MetricField& metric,
                           double threshold);

// Sorts by metric descending (ties by clip_id ascending) and takes the
// shortest prefix reaching target_hours. Overshoot is bounded by the last
// included clip's duration.
Subset select_by_hours(const std::vector<ClipRecord>& records, const MetricField& metric,
                       double target_hours);

// Same clips, paths swapped to the non-enhanced originals.
Subset control_subset(const Subset& enhanced_selection);

struct StatsRow {
  std::string key;  // bin label or group name
  double mean_original = 0.0;
  double mean_enhanced = 0.0;
  double diff = 0.0;
  std::uint64_t count = 0;
};

struct StatsTable {
  std::vector<StatsRow> rows;
  std::uint64_t excluded = 0;  // records missing either score
};

// Mean original/enhanced mos per bin of the ORIGINAL score:
// [1,2) [2,3) [3,4) [4,5].
StatsTable bin_stats(const std::vector<ClipRecord>& records);

enum class GroupKey { sex, age_band };
StatsTable group_stats(const std::vector<ClipRecord>& records, GroupKey key);

struct MeanDelta {
  double mean_original = 0.0;
  double mean_enhanced = 0.0;
  double diff = 0.0;
  std::uint64_t count = 0;
  std::uint64_t excluded = 0;
};

MeanDelta mean_delta(const std::vector<ClipRecord>& records);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t count = 0;
};

// Counts over [1, 5]; the final bin is closed so 5.0 lands in it. Records
// without the requested score are skipped.
std::vector<HistogramBin> score_histogram(const std::vector<ClipRecord>& records, PathSide which,
                                          double bin_width);

double total_hours(const std::vector<ClipRecord>& records);

}  // namespace voxprep
