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

#include "voxprep/curation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace voxprep {

const char* to_string(Sex s) {
  switch (s) {
    case Sex::female: return "female";
    case Sex::male: return "male";
    case Sex::unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(AgeBand b) {
  switch (b) {
    case AgeBand::teens: return "teens";
    case AgeBand::twenties: return "twenties";
    case AgeBand::thirties: return "thirties";
    case AgeBand::fourties: return "fourties";
    case AgeBand::fifties: return "fifties";
    case AgeBand::sixties: return "sixties";
    case AgeBand::seventies: return "seventies";
    case AgeBand::eighties: return "eighties";
    case AgeBand::nineties: return "nineties";
    case AgeBand::unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(ClipStatus s) {
  switch (s) {
    case ClipStatus::pending: return "pending";
    case ClipStatus::enhanced: return "enhanced";
    case ClipStatus::enhancement_failed: return "enhancement_failed";
    case ClipStatus::enhancement_timeout: return "enhancement_timeout";
    case ClipStatus::all_silent: return "all_silent";
    case ClipStatus::scored: return "scored";
    case ClipStatus::score_failed: return "score_failed";
  }
  return "pending";
}

Sex sex_from_string(const std::string& s) {
  if (s == "female" || s == "female_feminine") return Sex::female;
  if (s == "male" || s == "male_masculine") return Sex::male;
  return Sex::unknown;
}

AgeBand age_band_from_string(const std::string& s) {
  if (s == "teens") return AgeBand::teens;
  if (s == "twenties") return AgeBand::twenties;
  if (s == "thirties") return AgeBand::thirties;
  if (s == "fourties" || s == "forties") return AgeBand::fourties;
  if (s == "fifties") return AgeBand::fifties;
  if (s == "sixties") return AgeBand::sixties;
  if (s == "seventies") return AgeBand::seventies;
  if (s == "eighties") return AgeBand::eighties;
  if (s == "nineties") return AgeBand::nineties;
  return AgeBand::unknown;
}

ClipStatus clip_status_from_string(const std::string& s) {
  if (s == "pending") return ClipStatus::pending;
  if (s == "enhanced") return ClipStatus::enhanced;
  if (s == "enhancement_failed") return ClipStatus::enhancement_failed;
  if (s == "enhancement_timeout") return ClipStatus::enhancement_timeout;
  if (s == "all_silent") return ClipStatus::all_silent;
  if (s == "scored") return ClipStatus::scored;
  if (s == "score_failed") return ClipStatus::score_failed;
  raise(Errc::bad_manifest, "unknown clip status: " + s);
}

MetricField MetricField::parse(const std::string& name) {
  MetricField m;
  std::string base = name;
  if (base.rfind("original.", 0) == 0) {
    m.side = Side::original;
    base = base.substr(9);
  } else if (base.rfind("enhanced.", 0) == 0) {
    m.side = Side::enhanced;
    base = base.substr(9);
  }
  if (base == "mos" || base == "nisqa_mos") {
    m.field = Field::mos;
  } else if (base == "noisiness" || base == "nisqa_noi" || base == "noi") {
    m.field = Field::noisiness;
  } else if (base == "coloration" || base == "nisqa_col" || base == "col") {
    m.field = Field::coloration;
  } else if (base == "discontinuity" || base == "nisqa_dis" || base == "dis") {
    m.field = Field::discontinuity;
  } else if (base == "loudness" || base == "nisqa_loud" || base == "loud") {
    m.field = Field::loudness;
  } else if (base == "utmos") {
    m.field = Field::utmos;
  } else {
    raise(Errc::invalid_argument, "unknown metric: " + name);
  }
  return m;
}

std::string MetricField::name() const {
  std::string out = side == Side::original ? "original." : "";
  switch (field) {
    case Field::mos: out += "mos"; break;
    case Field::noisiness: out += "noisiness"; break;
    case Field::coloration: out += "coloration"; break;
    case Field::discontinuity: out += "discontinuity"; break;
    case Field::loudness: out += "loudness"; break;
    case Field::utmos: out += "utmos"; break;
  }
  return out;
}

std::optional<double> MetricField::value(const ClipRecord& r) const {
  const auto& score = side == Side::original ? r.score_original : r.score_enhanced;
  if (!score) return std::nullopt;
  switch (field) {
    case Field::mos: return score->mos;
    case Field::noisiness: return score->noisiness;
    case Field::coloration: return score->coloration;
    case Field::discontinuity: return score->discontinuity;
    case Field::loudness: return score->loudness;
    case Field::utmos: return score->utmos;
  }
  return std::nullopt;
}

double total_hours(const std::vector<ClipRecord>& records) {
  double seconds = 0.0;
  for (const auto& r : records) seconds += r.duration_s;
  return seconds / 3600.0;
}

std::vector<ClipRecord> filter_speakers(const std::vector<ClipRecord>& records,
                                        double min_total_s) {
  std::size_t missing = 0;
  std::unordered_map<std::string, double> speaker_seconds;
  for (const auto& r : records) {
    if (r.duration_s <= 0.0) ++missing;
    speaker_seconds[r.speaker_id] += r.duration_s;
  }
  if (missing > 0) {
    raise(Errc::bad_manifest,
          "filter_speakers: " + std::to_string(missing) + " records lack durations");
  }
  std::vector<ClipRecord> kept;
  for (const auto& r : records) {
    if (speaker_seconds[r.speaker_id] > min_total_s) kept.push_back(r);
  }
  return kept;
}

namespace {

void require_scored(const std::vector<ClipRecord>& records, const MetricField& metric) {
  std::size_t unscored = 0;
  for (const auto& r : records) {
    if (!metric.value(r)) ++unscored;
  }
  if (unscored > 0) {
    raise(Errc::missing_scores, std::to_string(unscored) + " of " +
                                    std::to_string(records.size()) + " records lack metric " +
                                    metric.name());
  }
}

std::vector<const ClipRecord*> sorted_by_id(const std::vector<ClipRecord>& records) {
  std::vector<const ClipRecord*> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(&r);
  std::sort(out.begin(), out.end(),
            [](const ClipRecord* a, const ClipRecord* b) { return a->clip_id < b->clip_id; });
  return out;
}

}  // namespace

ThresholdCurve threshold_curve(const std::vector<ClipRecord>& records, const MetricField& metric,
                               const std::vector<double>& grid) {
  if (grid.empty()) raise(Errc::invalid_argument, "threshold_curve: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) {
      raise(Errc::invalid_argument, "threshold_curve: grid must be strictly increasing");
    }
  }
  require_scored(records, metric);

  ThresholdCurve curve;
  curve.metric = metric.name();
  curve.points.reserve(grid.size());
  for (double t : grid) {
    double seconds = 0.0;
    for (const auto& r : records) {
      if (*metric.value(r) >= t) seconds += r.duration_s;
    }
    curve.points.emplace_back(t, seconds / 3600.0);
  }
  return curve;
}

Subset select_by_threshold(const std::vector<ClipRecord>& records, const MetricField& metric,
                           double threshold) {
  require_scored(records, metric);
  Subset subset;
  subset.spec.mode = SubsetSpec::Mode::by_threshold;
  subset.spec.metric = metric.name();
  subset.spec.threshold = threshold;
  subset.spec.realized_threshold = threshold;
  subset.side = metric.side == MetricField::Side::original ? PathSide::original
                                                           : PathSide::enhanced;
  for (const ClipRecord* r : sorted_by_id(records)) {
    if (*metric.value(*r) >= threshold) subset.records.push_back(*r);
  }
  subset.spec.realized_hours = total_hours(subset.records);
  return subset;
}

Subset select_by_hours(const std::vector<ClipRecord>& records, const MetricField& metric,
                       double target_hours) {
  if (target_hours <= 0.0) raise(Errc::invalid_argument, "select_by_hours: target must be > 0");
  require_scored(records, metric);

  const double available = total_hours(records);
  if (available < target_hours) {
    raise(Errc::insufficient_hours, "select_by_hours: corpus holds " +
                                        std::to_string(available) + " h, requested " +
                                        std::to_string(target_hours) + " h");
  }

  std::vector<const ClipRecord*> order;
  order.reserve(records.size());
  for (const auto& r : records) order.push_back(&r);
  std::sort(order.begin(), order.end(), [&](const ClipRecord* a, const ClipRecord* b) {
    const double ma = *metric.value(*a);
    const double mb = *metric.value(*b);
    if (ma != mb) return ma > mb;
    return a->clip_id < b->clip_id;
  });

  Subset subset;
  subset.spec.mode = SubsetSpec::Mode::by_hours;
  subset.spec.metric = metric.name();
  subset.spec.target_hours = target_hours;
  subset.side = metric.side == MetricField::Side::original ? PathSide::original
                                                           : PathSide::enhanced;
  double seconds = 0.0;
  for (const ClipRecord* r : order) {
    subset.records.push_back(*r);
    seconds += r->duration_s;
    if (seconds / 3600.0 >= target_hours) {
      subset.spec.realized_threshold = *metric.value(*r);
      break;
    }
  }
  subset.spec.realized_hours = seconds / 3600.0;
  std::sort(subset.records.begin(), subset.records.end(),
            [](const ClipRecord& a, const ClipRecord& b) { return a.clip_id < b.clip_id; });
  return subset;
}

Subset control_subset(const Subset& enhanced_selection) {
  std::vector<std::string> missing;
  for (const auto& r : enhanced_selection.records) {
    if (r.original_path.empty()) missing.push_back(r.clip_id);
  }
  if (!missing.empty()) {
    std::string ids;
    for (std::size_t i = 0; i < missing.size() && i < 10; ++i) {
      ids += (i ? ", " : "") + missing[i];
    }
    if (missing.size() > 10) ids += ", ...";
    raise(Errc::missing_original,
          std::to_string(missing.size()) + " clips lack an original path: " + ids);
  }
  Subset control = enhanced_selection;
  control.side = PathSide::original;
  return control;
}

StatsTable bin_stats(const std::vector<ClipRecord>& records) {
  // Bins keyed on the original score so both columns describe the same
  // population: [1,2) [2,3) [3,4) [4,5].
  constexpr int kBins = 4;
  struct Acc {
    double orig = 0.0, enh = 0.0;
    std::uint64_t n = 0;
  };
  Acc acc[kBins];
  StatsTable table;
  for (const auto& r : records) {
    if (!r.score_original || !r.score_enhanced) {
      ++table.excluded;
      continue;
    }
    const double orig = r.score_original->mos;
    int bin = static_cast<int>(std::floor(orig)) - 1;
    bin = std::clamp(bin, 0, kBins - 1);  // 5.0 closes the last bin
    acc[bin].orig += orig;
    acc[bin].enh += r.score_enhanced->mos;
    acc[bin].n += 1;
  }
  static const char* kLabels[kBins] = {"1-2", "2-3", "3-4", "4-5"};
  for (int b = 0; b < kBins; ++b) {
    if (acc[b].n == 0) continue;
    StatsRow row;
    row.key = kLabels[b];
    row.count = acc[b].n;
    row.mean_original = acc[b].orig / acc[b].n;
    row.mean_enhanced = acc[b].enh / acc[b].n;
    row.diff = row.mean_enhanced - row.mean_original;
    table.rows.push_back(row);
  }
  return table;
}

StatsTable group_stats(const std::vector<ClipRecord>& records, GroupKey key) {
  struct Acc {
    double orig = 0.0, enh = 0.0;
    std::uint64_t n = 0;
  };
  std::map<std::string, Acc> groups;  // ordered so output is deterministic
  StatsTable table;
  for (const auto& r : records) {
    if (!r.score_original || !r.score_enhanced) {
      ++table.excluded;
      continue;
    }
    const std::string label =
        key == GroupKey::sex ? to_string(r.sex) : to_string(r.age_band);
    auto& acc = groups[label];
    acc.orig += r.score_original->mos;
    acc.enh += r.score_enhanced->mos;
    acc.n += 1;
  }
  for (const auto& [label, acc] : groups) {
    StatsRow row;
    row.key = label;
    row.count = acc.n;
    row.mean_original = acc.orig / acc.n;
    row.mean_enhanced = acc.enh / acc.n;
    row.diff = row.mean_enhanced - row.mean_original;
    table.rows.push_back(row);
  }
  return table;
}

MeanDelta mean_delta(const std::vector<ClipRecord>& records) {
  MeanDelta delta;
  double orig = 0.0;
  double enh = 0.0;
  for (const auto& r : records) {
    if (!r.score_original || !r.score_enhanced) {
      ++delta.excluded;
      continue;
    }
    orig += r.score_original->mos;
    enh += r.score_enhanced->mos;
    ++delta.count;
  }
  if (delta.count > 0) {
    delta.mean_original = orig / delta.count;
    delta.mean_enhanced = enh / delta.count;
    delta.diff = delta.mean_enhanced - delta.mean_original;
  }
  return delta;
}

std::vector<HistogramBin> score_histogram(const std::vector<ClipRecord>& records, PathSide which,
                                          double bin_width) {
  if (bin_width <= 0.0 || bin_width > 4.0) {
    raise(Errc::invalid_argument, "score_histogram: bin width must be in (0, 4]");
  }
  const int n_bins = static_cast<int>(std::ceil(4.0 / bin_width - 1e-12));
  std::vector<HistogramBin> bins(static_cast<std::size_t>(n_bins));
  for (int b = 0; b < n_bins; ++b) {
    bins[static_cast<std::size_t>(b)].lo = 1.0 + b * bin_width;
    bins[static_cast<std::size_t>(b)].hi = std::min(5.0, 1.0 + (b + 1) * bin_width);
  }
  for (const auto& r : records) {
    const auto& score = which == PathSide::original ? r.score_original : r.score_enhanced;
    if (!score) continue;
    int b = static_cast<int>(std::floor((score->mos - 1.0) / bin_width));
    b = std::clamp(b, 0, n_bins - 1);  // 5.0 lands in the final bin
    bins[static_cast<std::size_t>(b)].count += 1;
  }
  return bins;
}

}  // namespace voxprep
