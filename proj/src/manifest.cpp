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

#include "voxprep/manifest.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "voxprep/wav.hpp"

namespace voxprep {
namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> split_tsv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

std::string path_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

std::ifstream open_text(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) raise(Errc::io_error, "cannot open " + path.string());
  return file;
}

std::ofstream create_text(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::trunc);
  if (!file) raise(Errc::io_error, "cannot write " + path.string());
  return file;
}

ordered_json score_to_json(const QualityScore& s) {
  ordered_json j;
  j["mos"] = s.mos;
  if (s.noisiness) j["noisiness"] = *s.noisiness;
  if (s.coloration) j["coloration"] = *s.coloration;
  if (s.discontinuity) j["discontinuity"] = *s.discontinuity;
  if (s.loudness) j["loudness"] = *s.loudness;
  if (s.utmos) j["utmos"] = *s.utmos;
  j["scorer_id"] = s.scorer_id;
  return j;
}

QualityScore score_from_json(const ordered_json& j) {
  QualityScore s;
  s.mos = j.at("mos").get<double>();
  auto opt = [&](const char* key) -> std::optional<double> {
    if (j.contains(key)) return j[key].get<double>();
    return std::nullopt;
  };
  s.noisiness = opt("noisiness");
  s.coloration = opt("coloration");
  s.discontinuity = opt("discontinuity");
  s.loudness = opt("loudness");
  s.utmos = opt("utmos");
  s.scorer_id = j.value("scorer_id", "");
  return s;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

std::vector<ClipRecord> load_manifest_tsv(const std::filesystem::path& tsv_path) {
  std::ifstream file = open_text(tsv_path);
  std::string line;
  if (!std::getline(file, line)) raise(Errc::bad_manifest, "empty TSV: " + tsv_path.string());

  const std::vector<std::string> header = split_tsv_line(line);
  std::unordered_map<std::string, std::size_t> columns;
  for (std::size_t i = 0; i < header.size(); ++i) columns[header[i]] = i;

  for (const char* required : {"client_id", "path", "sentence"}) {
    if (!columns.count(required)) {
      raise(Errc::bad_manifest, std::string("missing column: ") + required);
    }
  }
  const auto col = [&](const char* name) -> std::optional<std::size_t> {
    const auto it = columns.find(name);
    if (it == columns.end()) return std::nullopt;
    return it->second;
  };
  const std::size_t c_client = *col("client_id");
  const std::size_t c_path = *col("path");
  const std::size_t c_sentence = *col("sentence");
  const auto c_age = col("age");
  const auto c_gender = col("gender");
  const auto c_duration = col("duration_s");

  std::vector<ClipRecord> records;
  std::set<std::string> seen_paths;
  std::size_t line_no = 1;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_tsv_line(line);
    if (fields.size() < header.size()) {
      raise(Errc::bad_manifest, tsv_path.string() + ":" + std::to_string(line_no) +
                                    ": expected " + std::to_string(header.size()) + " fields");
    }
    ClipRecord r;
    r.speaker_id = fields[c_client];
    r.original_path = fields[c_path];
    r.sentence = fields[c_sentence];
    r.clip_id = path_stem(r.original_path);
    if (!seen_paths.insert(r.original_path).second) {
      raise(Errc::bad_manifest, "duplicate clip path: " + r.original_path);
    }
    if (c_gender) r.sex = sex_from_string(fields[*c_gender]);
    if (c_age) r.age_band = age_band_from_string(fields[*c_age]);
    if (c_duration && !fields[*c_duration].empty()) {
      r.duration_s = std::stod(fields[*c_duration]);
    }
    records.push_back(std::move(r));
  }
  return records;
}

void load_durations(std::vector<ClipRecord>& records,
                    const std::filesystem::path& durations_path) {
  std::ifstream file = open_text(durations_path);
  std::unordered_map<std::string, double> by_key;
  std::string line;
  while (std::getline(file, line)) {
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = split_tsv_line(line);
    if (fields.size() < 2) continue;
    by_key[fields[0]] = std::stod(fields[1]);
  }
  for (auto& r : records) {
    auto it = by_key.find(r.original_path);
    if (it == by_key.end()) it = by_key.find(r.clip_id);
    if (it != by_key.end()) r.duration_s = it->second;
  }
}

std::size_t fill_durations(std::vector<ClipRecord>& records,
                           const std::filesystem::path& audio_root) {
  std::size_t probed = 0;
  for (auto& r : records) {
    if (r.duration_s > 0.0) continue;
    const std::filesystem::path p = audio_root.empty()
                                        ? std::filesystem::path(r.original_path)
                                        : audio_root / r.original_path;
    r.duration_s = probe_wav(p).duration_s;
    ++probed;
  }
  return probed;
}

std::string clip_record_to_json_line(const ClipRecord& r) {
  ordered_json j;
  j["clip_id"] = r.clip_id;
  j["speaker_id"] = r.speaker_id;
  j["original_path"] = r.original_path;
  if (!r.enhanced_path.empty()) j["enhanced_path"] = r.enhanced_path;
  j["duration_s"] = r.duration_s;
  j["sex"] = to_string(r.sex);
  j["age_band"] = to_string(r.age_band);
  j["sentence"] = r.sentence;
  if (r.score_original) j["score_original"] = score_to_json(*r.score_original);
  if (r.score_enhanced) j["score_enhanced"] = score_to_json(*r.score_enhanced);
  j["status"] = to_string(r.status);
  if (!r.failure_detail.empty()) j["failure_detail"] = r.failure_detail;
  return j.dump();
}

ClipRecord clip_record_from_json_line(const std::string& line) {
  const ordered_json j = ordered_json::parse(line);
  ClipRecord r;
  r.clip_id = j.at("clip_id").get<std::string>();
  r.speaker_id = j.value("speaker_id", "");
  r.original_path = j.value("original_path", "");
  r.enhanced_path = j.value("enhanced_path", "");
  r.duration_s = j.value("duration_s", 0.0);
  r.sex = sex_from_string(j.value("sex", "unknown"));
  r.age_band = age_band_from_string(j.value("age_band", "unknown"));
  r.sentence = j.value("sentence", "");
  if (j.contains("score_original")) r.score_original = score_from_json(j["score_original"]);
  if (j.contains("score_enhanced")) r.score_enhanced = score_from_json(j["score_enhanced"]);
  r.status = clip_status_from_string(j.value("status", "pending"));
  r.failure_detail = j.value("failure_detail", "");
  return r;
}

void save_manifest_jsonl(const std::vector<ClipRecord>& records,
                         const std::filesystem::path& path) {
  std::vector<const ClipRecord*> order;
  order.reserve(records.size());
  for (const auto& r : records) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const ClipRecord* a, const ClipRecord* b) { return a->clip_id < b->clip_id; });

  std::ofstream file = create_text(path);
  for (const ClipRecord* r : order) file << clip_record_to_json_line(*r) << '\n';
  file.flush();
  if (!file) raise(Errc::io_error, "write failed: " + path.string());
}

std::vector<ClipRecord> load_manifest_jsonl(const std::filesystem::path& path) {
  std::ifstream file = open_text(path);
  std::vector<ClipRecord> records;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(clip_record_from_json_line(line));
    } catch (const std::exception& e) {
      raise(Errc::bad_manifest,
            path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!ids.insert(records.back().clip_id).second) {
      raise(Errc::bad_manifest, "duplicate clip_id: " + records.back().clip_id);
    }
  }
  return records;
}

std::vector<ClipRecord> load_any_manifest(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".tsv") return load_manifest_tsv(path);
  if (ext == ".jsonl") return load_manifest_jsonl(path);
  raise(Errc::bad_manifest, "manifest must be .tsv or .jsonl: " + path.string());
}

void save_subset_tsv(const Subset& subset, const std::filesystem::path& path) {
  std::ofstream file = create_text(path);
  file << "path\tspeaker_id\tsentence\n";
  for (const auto& r : subset.records) {
    const std::string& p =
        subset.side == PathSide::original ? r.original_path : r.enhanced_path;
    file << p << '\t' << r.speaker_id << '\t' << r.sentence << '\n';
  }
  file.flush();
  if (!file) raise(Errc::io_error, "write failed: " + path.string());
}

void save_subset_spec_json(const Subset& subset, const std::filesystem::path& path) {
  ordered_json j;
  j["mode"] = subset.spec.mode == SubsetSpec::Mode::by_threshold ? "by_threshold" : "by_hours";
  j["metric"] = subset.spec.metric;
  if (subset.spec.mode == SubsetSpec::Mode::by_threshold) {
    j["threshold"] = subset.spec.threshold;
  } else {
    j["target_hours"] = subset.spec.target_hours;
  }
  j["realized_hours"] = subset.spec.realized_hours;
  j["realized_threshold"] = subset.spec.realized_threshold;
  j["side"] = subset.side == PathSide::original ? "original" : "enhanced";
  j["clips"] = subset.records.size();
  std::ofstream file = create_text(path);
  file << j.dump(2) << '\n';
}

void save_curve_csv(const ThresholdCurve& curve, const std::filesystem::path& path) {
  std::ofstream file = create_text(path);
  file << "threshold,hours\n";
  for (const auto& [t, h] : curve.points) {
    file << format_double(t) << ',' << format_double(h) << '\n';
  }
}

void save_stats_csv(const StatsTable& table, const std::string& key_column,
                    const std::filesystem::path& path) {
  std::ofstream file = create_text(path);
  file << key_column << ",mean_original,mean_enhanced,diff,count\n";
  for (const auto& row : table.rows) {
    file << row.key << ',' << format_double(row.mean_original) << ','
         << format_double(row.mean_enhanced) << ',' << format_double(row.diff) << ','
         << row.count << '\n';
  }
}

void save_mean_delta_csv(const MeanDelta& delta, const std::filesystem::path& path) {
  std::ofstream file = create_text(path);
  file << "mean_original,mean_enhanced,diff,count\n";
  file << format_double(delta.mean_original) << ',' << format_double(delta.mean_enhanced) << ','
       << format_double(delta.diff) << ',' << delta.count << '\n';
}

void save_histogram_csv(const std::vector<HistogramBin>& bins,
                        const std::filesystem::path& path) {
  std::ofstream file = create_text(path);
  file << "bin_lo,bin_hi,count\n";
  for (const auto& bin : bins) {
    file << format_double(bin.lo) << ',' << format_double(bin.hi) << ',' << bin.count << '\n';
  }
}

namespace {

constexpr int kChartW = 640;
constexpr int kChartH = 400;
constexpr int kMargin = 50;

struct SvgCanvas {
  std::ofstream file;

  explicit SvgCanvas(const std::filesystem::path& path) : file(create_text(path)) {
    file << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kChartW << "\" height=\""
         << kChartH << "\" viewBox=\"0 0 " << kChartW << " " << kChartH << "\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    file << "<line x1=\"" << kMargin << "\" y1=\"" << kChartH - kMargin << "\" x2=\""
         << kChartW - kMargin << "\" y2=\"" << kChartH - kMargin
         << "\" stroke=\"black\"/>\n<line x1=\"" << kMargin << "\" y1=\"" << kMargin
         << "\" x2=\"" << kMargin << "\" y2=\"" << kChartH - kMargin << "\" stroke=\"black\"/>\n";
  }

  double sx(double frac) const { return kMargin + frac * (kChartW - 2 * kMargin); }
  double sy(double frac) const { return kChartH - kMargin - frac * (kChartH - 2 * kMargin); }

  void label(double x, double y, const std::string& text, const char* anchor = "middle") {
    file << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"12\" text-anchor=\"" << anchor
         << "\">" << text << "</text>\n";
  }

  void finish() { file << "</svg>\n"; }
};

}  // namespace

void save_curve_svg(const ThresholdCurve& curve, const std::filesystem::path& path) {
  SvgCanvas canvas(path);
  if (!curve.points.empty()) {
    const double x0 = curve.points.front().first;
    const double x1 = curve.points.back().first;
    double ymax = 0.0;
    for (const auto& [t, h] : curve.points) ymax = std::max(ymax, h);
    if (ymax <= 0.0) ymax = 1.0;
    const double xspan = x1 > x0 ? x1 - x0 : 1.0;

    canvas.file << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (const auto& [t, h] : curve.points) {
      canvas.file << canvas.sx((t - x0) / xspan) << ',' << canvas.sy(h / ymax) << ' ';
    }
    canvas.file << "\"/>\n";
    canvas.label(canvas.sx(0.0), kChartH - kMargin + 20, format_double(x0));
    canvas.label(canvas.sx(1.0), kChartH - kMargin + 20, format_double(x1));
    canvas.label(kMargin - 8, canvas.sy(1.0), format_double(ymax), "end");
    canvas.label(kMargin - 8, canvas.sy(0.0), "0", "end");
    canvas.label(kChartW / 2.0, kChartH - 12, curve.metric + " threshold");
    canvas.label(kChartW / 2.0, kMargin - 16, "hours");
  }
  canvas.finish();
}

void save_histogram_svg(const std::vector<HistogramBin>& bins,
                        const std::filesystem::path& path) {
  SvgCanvas canvas(path);
  if (!bins.empty()) {
    std::uint64_t ymax = 1;
    for (const auto& bin : bins) ymax = std::max(ymax, bin.count);
    const double width = 1.0 / static_cast<double>(bins.size());
    for (std::size_t i = 0; i < bins.size(); ++i) {
      const double frac = static_cast<double>(bins[i].count) / static_cast<double>(ymax);
      const double x = canvas.sx(i * width);
      const double y = canvas.sy(frac);
      const double w = canvas.sx(width) - canvas.sx(0.0);
      const double h = canvas.sy(0.0) - y;
      canvas.file << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w * 0.9
                  << "\" height=\"" << h << "\" fill=\"#ff7f0e\"/>\n";
    }
    canvas.label(canvas.sx(0.0), kChartH - kMargin + 20, format_double(bins.front().lo));
    canvas.label(canvas.sx(1.0), kChartH - kMargin + 20, format_double(bins.back().hi));
    canvas.label(kMargin - 8, canvas.sy(1.0), std::to_string(ymax), "end");
    canvas.label(kChartW / 2.0, kChartH - 12, "score");
    canvas.label(kChartW / 2.0, kMargin - 16, "clips");
  }
  canvas.finish();
}

}  // namespace voxprep
