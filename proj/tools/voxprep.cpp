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

// voxprep: batch enhancement, quality scoring and curation of crowdsourced
// speech corpora. One subcommand per operation; all machine-readable output
// is CSV or JSONL under the requested output directory.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "voxprep/manifest.hpp"
#include "voxprep/pipeline.hpp"

namespace fs = std::filesystem;
using namespace voxprep;

namespace {

// The four selection thresholds shipped as the --paper-subsets preset.
constexpr double kPresetThresholds[] = {2.0, 4.0, 4.4, 4.6};

std::string check_metric(const std::string& name) {
  try {
    MetricField::parse(name);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::vector<double> parse_grid(const std::string& csv, const std::string& linspace) {
  std::vector<double> grid;
  if (!linspace.empty()) {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
    if (std::sscanf(linspace.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2 ||
        hi <= lo) {
      raise(Errc::invalid_argument, "--grid-linspace expects lo:hi:count with hi > lo");
    }
    for (int i = 0; i < count; ++i) {
      grid.push_back(lo + (hi - lo) * i / (count - 1));
    }
    return grid;
  }
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) grid.push_back(std::stod(token));
  }
  if (grid.empty()) raise(Errc::invalid_argument, "empty threshold grid");
  return grid;
}

fs::path manifest_dir(const fs::path& manifest) {
  return manifest.has_parent_path() ? manifest.parent_path() : fs::path(".");
}

// Manifest load shared by the curation subcommands, with the optional
// speaker-duration floor applied up front.
std::vector<ClipRecord> load_records(const std::string& manifest, double min_speaker_seconds) {
  auto records = load_any_manifest(manifest);
  if (min_speaker_seconds > 0.0) records = filter_speakers(records, min_speaker_seconds);
  return records;
}

void add_speaker_filter_flag(CLI::App* cmd, double& value) {
  cmd->add_option("--min-speaker-seconds", value,
                  "Drop clips of speakers with at most this many total seconds");
}

fs::path side_audio_path(const ClipRecord& r, PathSide side, const fs::path& manifest_path,
                         const fs::path& audio_root) {
  if (side == PathSide::enhanced) {
    return manifest_dir(manifest_path) / r.enhanced_path;
  }
  const fs::path p(r.original_path);
  if (p.is_absolute() || audio_root.empty()) return p;
  return audio_root / p;
}

void print_subset_summary(const char* label, const Subset& subset) {
  std::printf("%s: %zu clips, %.3f h (metric %s, realized threshold %.3f)\n", label,
              subset.records.size(), subset.spec.realized_hours, subset.spec.metric.c_str(),
              subset.spec.realized_threshold);
}

void write_subset(const Subset& subset, const fs::path& out_dir, const std::string& stem) {
  save_subset_tsv(subset, out_dir / (stem + ".tsv"));
  save_subset_spec_json(subset, out_dir / (stem + "_spec.json"));
}

struct SelectionFlags {
  std::string manifest;
  std::string metric = "mos";
  double threshold = 0.0;
  double hours = 0.0;
  double min_speaker_seconds = 0.0;
  bool have_threshold = false;
  bool have_hours = false;
};

Subset run_selection(const SelectionFlags& flags) {
  const auto records = load_records(flags.manifest, flags.min_speaker_seconds);
  const MetricField metric = MetricField::parse(flags.metric);
  if (flags.have_hours) return select_by_hours(records, metric, flags.hours);
  return select_by_threshold(records, metric, flags.threshold);
}

void add_select_flags(CLI::App* cmd, SelectionFlags& flags, bool* paper_subsets) {
  cmd->add_option("--manifest", flags.manifest, "Scored manifest (.jsonl)")->required();
  cmd->add_option("--metric", flags.metric,
                  "Score field: mos|noisiness|coloration|discontinuity|loudness|utmos, "
                  "optionally prefixed original. or enhanced. (default side: enhanced); "
                  "nisqa_* aliases accepted")
      ->check([](const std::string& v) { return check_metric(v); });
  add_speaker_filter_flag(cmd, flags.min_speaker_seconds);
  auto* thr = cmd->add_option("--threshold", flags.threshold,
                              "Keep clips with metric >= threshold");
  auto* hrs = cmd->add_option("--hours", flags.hours,
                              "Keep the best-scored clips totalling this many hours");
  thr->excludes(hrs);
  hrs->excludes(thr);
  if (paper_subsets != nullptr) {
    auto* preset = cmd->add_flag("--paper-subsets", *paper_subsets,
                                 "Produce the four preset subsets at thresholds "
                                 "2.0, 4.0, 4.4 and 4.6");
    preset->excludes(thr);
    preset->excludes(hrs);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voxprep: enhancement, scoring and curation for crowdsourced speech corpora"};
  app.require_subcommand(1);

  std::function<int()> action;

  // ---- run / resume ------------------------------------------------------
  struct {
    std::string config;
    std::string checkpoint;
    int workers = 0;
  } run_flags;

  const auto make_run_action = [&](bool resume) {
    return [&, resume]() {
      // Worker count resolution: --workers flag > config key > VOXPREP_WORKERS
      // environment default (applied by the config loader).
      PipelineConfig cfg = load_pipeline_config(run_flags.config);
      if (run_flags.workers > 0) cfg.worker_count = run_flags.workers;
      if (!run_flags.checkpoint.empty()) cfg.checkpoint = run_flags.checkpoint;
      const RunReport report = resume ? resume_pipeline(cfg) : run_pipeline(cfg);
      std::cout << run_report_to_text(report);
      return 0;
    };
  };

  auto* run_cmd = app.add_subcommand("run", "Run the enhancement pipeline over a manifest");
  run_cmd->add_option("--config", run_flags.config, "Pipeline config (JSON)")->required();
  run_cmd->add_option("--workers", run_flags.workers, "Worker thread count override");
  run_cmd->add_option("--checkpoint", run_flags.checkpoint, "Checkpoint file override");
  run_cmd->callback([&] { action = make_run_action(false); });

  auto* resume_cmd = app.add_subcommand("resume", "Resume an interrupted run from its checkpoint");
  resume_cmd->add_option("--config", run_flags.config, "Pipeline config (JSON)")->required();
  resume_cmd->add_option("--workers", run_flags.workers, "Worker thread count override");
  resume_cmd->add_option("--checkpoint", run_flags.checkpoint, "Checkpoint file override");
  resume_cmd->callback([&] { action = make_run_action(true); });

  // ---- enhance-one -------------------------------------------------------
  struct {
    std::string input;
    std::string output;
    std::string config;
    bool no_subtract = false;
    bool no_trim = false;
  } one_flags;

  auto* one_cmd = app.add_subcommand("enhance-one", "Enhance a single WAV file");
  one_cmd->add_option("--input", one_flags.input, "Input WAV")->required();
  one_cmd->add_option("--output", one_flags.output, "Output WAV")->required();
  one_cmd->add_option("--config", one_flags.config, "Pipeline config for DSP parameters");
  one_cmd->add_flag("--no-subtract", one_flags.no_subtract, "Skip spectral subtraction");
  one_cmd->add_flag("--no-trim", one_flags.no_trim, "Skip trimming and padding");
  one_cmd->callback([&] {
    action = [&]() {
      PipelineConfig cfg;
      if (!one_flags.config.empty()) cfg = load_pipeline_config(one_flags.config);
      AudioClip clip = read_wav(one_flags.input);
      std::printf("input:  %s (%d Hz, %.3f s)\n", one_flags.input.c_str(), clip.sample_rate,
                  clip.duration_seconds());
      if (cfg.enable_external_enhancer && !cfg.enhancer_command.empty()) {
        const fs::path tmp = fs::path(one_flags.output).string() + ".enhancer.wav";
        const HookResult hook =
            enhance_external(one_flags.input, tmp, cfg.enhancer_command, cfg.enhancer_timeout_s);
        if (hook.status != HookStatus::ok) {
          raise(Errc::io_error, "external enhancer failed: " + hook.detail);
        }
        clip = read_wav(tmp);
        fs::remove(tmp);
        std::printf("enhancer: ok (%d Hz, %.3f s)\n", clip.sample_rate, clip.duration_seconds());
      }
      if (!one_flags.no_subtract) {
        const NoiseProfile profile = estimate_noise_profile(clip, cfg.tail_s, cfg.subtract);
        clip = spectral_subtract(clip, profile, cfg.subtract);
        std::printf("subtract: profile from %.3f s tail%s\n", profile.source_seconds,
                    profile.used_whole_clip ? " (whole clip, shorter than tail)" : "");
      }
      if (!one_flags.no_trim) {
        clip = trim_and_pad(clip, cfg.trim);
        std::printf("trim:   %.3f s after trim+pad\n", clip.duration_seconds());
      }
      const WavWriteStats stats = write_wav(clip, one_flags.output, cfg.output_format);
      std::printf("output: %s (%.3f s, %llu samples clamped)\n", one_flags.output.c_str(),
                  clip.duration_seconds(), static_cast<unsigned long long>(stats.clamped_samples));
      return 0;
    };
  });

  // ---- score -------------------------------------------------------------
  struct {
    std::string manifest;
    std::string out_manifest;
    std::string scorer = "proxy";
    std::string command;
    std::string scorer_id = "external";
    std::string side = "both";
    std::string audio_root;
    double timeout_s = 120.0;
    int batch_size = 64;
  } score_flags;

  auto* score_cmd = app.add_subcommand("score", "Attach quality scores to a manifest");
  score_cmd->add_option("--manifest", score_flags.manifest, "Input manifest (.jsonl)")->required();
  score_cmd->add_option("--out-manifest", score_flags.out_manifest, "Scored manifest to write")
      ->required();
  score_cmd->add_option("--scorer", score_flags.scorer, "proxy or external")
      ->check(CLI::IsMember({"proxy", "external"}));
  score_cmd->add_option("--command", score_flags.command, "External scorer command");
  score_cmd->add_option("--scorer-id", score_flags.scorer_id, "Identity recorded on scores");
  score_cmd->add_option("--side", score_flags.side, "Which audio to score")
      ->check(CLI::IsMember({"both", "enhanced", "original"}));
  score_cmd->add_option("--audio-root", score_flags.audio_root, "Root for original paths");
  score_cmd->add_option("--timeout", score_flags.timeout_s, "Per-batch read timeout (s)");
  score_cmd->add_option("--batch-size", score_flags.batch_size, "Paths per scorer process");
  score_cmd->callback([&] {
    action = [&]() {
      auto records = load_any_manifest(score_flags.manifest);
      const bool want_enh = score_flags.side != "original";
      const bool want_orig = score_flags.side != "enhanced";

      struct Slot {
        ClipRecord* record;
        bool enhanced_side;
      };
      std::map<std::string, std::vector<Slot>> by_path;
      std::uint64_t skipped = 0;
      for (auto& r : records) {
        if (want_enh) {
          if (r.enhanced_path.empty()) {
            ++skipped;
          } else {
            by_path[fs::absolute(side_audio_path(r, PathSide::enhanced, score_flags.manifest,
                                                  score_flags.audio_root))
                        .string()]
                .push_back({&r, true});
          }
        }
        if (want_orig && !r.original_path.empty()) {
          by_path[fs::absolute(side_audio_path(r, PathSide::original, score_flags.manifest,
                                               score_flags.audio_root))
                      .string()]
              .push_back({&r, false});
        }
      }

      std::vector<std::string> paths;
      paths.reserve(by_path.size());
      for (const auto& [p, slots] : by_path) paths.push_back(p);

      const auto apply = [&](const std::string& path, const QualityScore* score,
                             const std::string& failure) {
        for (const Slot& slot : by_path[path]) {
          if (score != nullptr) {
            (slot.enhanced_side ? slot.record->score_enhanced : slot.record->score_original) =
                *score;
            if (slot.record->status == ClipStatus::pending ||
                slot.record->status == ClipStatus::enhanced ||
                slot.record->status == ClipStatus::scored) {
              const bool enh_ok = !want_enh || slot.record->score_enhanced.has_value() ||
                                  slot.record->enhanced_path.empty();
              const bool orig_ok = !want_orig || slot.record->score_original.has_value();
              if (enh_ok && orig_ok) slot.record->status = ClipStatus::scored;
            }
          } else {
            slot.record->status = ClipStatus::score_failed;
            slot.record->failure_detail = failure;
          }
        }
      };

      if (score_flags.scorer == "proxy") {
        for (const auto& path : paths) {
          try {
            const QualityScore s = proxy_score(read_wav(path));
            apply(path, &s, "");
          } catch (const Error& e) {
            apply(path, nullptr, e.what());
          }
        }
      } else {
        if (score_flags.command.empty()) {
          raise(Errc::bad_config, "--scorer external requires --command");
        }
        ExternalScorerOptions opts;
        opts.read_timeout_s = score_flags.timeout_s;
        opts.scorer_id = score_flags.scorer_id;
        const int batch = std::max(1, score_flags.batch_size);
        for (std::size_t start = 0; start < paths.size();
             start += static_cast<std::size_t>(batch)) {
          const std::size_t end = std::min(paths.size(), start + static_cast<std::size_t>(batch));
          const std::vector<std::string> chunk(paths.begin() + static_cast<std::ptrdiff_t>(start),
                                               paths.begin() + static_cast<std::ptrdiff_t>(end));
          const ScoreBatchResult result =
              run_external_scorer(chunk, score_flags.command, opts);
          for (const auto& [path, score] : result.scores) apply(path, &score, "");
          for (const auto& [path, reason] : result.failures) apply(path, nullptr, reason);
        }
      }

      save_manifest_jsonl(records, score_flags.out_manifest);
      std::printf("scored %zu paths (%llu records without enhanced audio skipped)\n",
                  paths.size(), static_cast<unsigned long long>(skipped));
      return 0;
    };
  });

  // ---- curve -------------------------------------------------------------
  struct {
    std::string manifest;
    std::string metric = "mos";
    std::string grid = "2.0,4.0,4.4,4.6";
    std::string linspace;
    std::string out;
    double min_speaker_seconds = 0.0;
    bool svg = false;
  } curve_flags;

  auto* curve_cmd = app.add_subcommand("curve", "Hours available as a function of score threshold");
  curve_cmd->add_option("--manifest", curve_flags.manifest, "Scored manifest (.jsonl)")->required();
  curve_cmd->add_option("--metric", curve_flags.metric, "Score field (see select --help)")
      ->check([](const std::string& v) { return check_metric(v); });
  curve_cmd->add_option("--grid", curve_flags.grid, "Comma-separated thresholds");
  curve_cmd->add_option("--grid-linspace", curve_flags.linspace, "lo:hi:count grid");
  curve_cmd->add_option("--out", curve_flags.out, "Output directory")->required();
  curve_cmd->add_flag("--svg", curve_flags.svg, "Also write curve.svg");
  add_speaker_filter_flag(curve_cmd, curve_flags.min_speaker_seconds);
  curve_cmd->callback([&] {
    action = [&]() {
      const auto records = load_records(curve_flags.manifest, curve_flags.min_speaker_seconds);
      const auto grid = parse_grid(curve_flags.grid, curve_flags.linspace);
      const ThresholdCurve curve =
          threshold_curve(records, MetricField::parse(curve_flags.metric), grid);
      const fs::path out(curve_flags.out);
      save_curve_csv(curve, out / "curve.csv");
      if (curve_flags.svg) save_curve_svg(curve, out / "curve.svg");
      for (const auto& [t, h] : curve.points) std::printf("%s\t%s\n", format_double(t).c_str(), format_double(h).c_str());
      return 0;
    };
  });

  // ---- select ------------------------------------------------------------
  SelectionFlags select_flags;
  bool paper_subsets = false;
  std::string select_out;
  auto* select_cmd = app.add_subcommand("select", "Select a subset by threshold or hour budget");
  add_select_flags(select_cmd, select_flags, &paper_subsets);
  select_cmd->add_option("--out", select_out, "Output directory")->required();
  select_cmd->callback([&] {
    action = [&]() {
      const fs::path out(select_out);
      if (paper_subsets) {
        const auto records =
            load_records(select_flags.manifest, select_flags.min_speaker_seconds);
        const MetricField metric = MetricField::parse(select_flags.metric);
        for (const double t : kPresetThresholds) {
          const Subset subset = select_by_threshold(records, metric, t);
          char stem[32];
          std::snprintf(stem, sizeof(stem), "ge_%.1f", t);
          fs::create_directories(out / stem);
          write_subset(subset, out / stem, "subset");
          print_subset_summary(stem, subset);
        }
        return 0;
      }
      if (!select_flags.have_threshold && !select_flags.have_hours) {
        raise(Errc::invalid_argument, "select needs --threshold, --hours or --paper-subsets");
      }
      const Subset subset = run_selection(select_flags);
      write_subset(subset, out, "subset");
      print_subset_summary("subset", subset);
      return 0;
    };
  });
  select_cmd->get_option("--threshold")->each([&](const std::string&) {
    select_flags.have_threshold = true;
  });
  select_cmd->get_option("--hours")->each([&](const std::string&) {
    select_flags.have_hours = true;
  });

  // ---- control -----------------------------------------------------------
  SelectionFlags control_flags;
  std::string control_out;
  auto* control_cmd = app.add_subcommand(
      "control", "Non-enhanced counterparts of a selection (same clips, original audio)");
  add_select_flags(control_cmd, control_flags, nullptr);
  control_cmd->add_option("--out", control_out, "Output directory")->required();
  control_cmd->callback([&] {
    action = [&]() {
      if (!control_flags.have_threshold && !control_flags.have_hours) {
        raise(Errc::invalid_argument, "control needs --threshold or --hours");
      }
      const Subset selection = run_selection(control_flags);
      const Subset control = control_subset(selection);
      write_subset(control, control_out, "control");
      print_subset_summary("control", control);
      return 0;
    };
  });
  control_cmd->get_option("--threshold")->each([&](const std::string&) {
    control_flags.have_threshold = true;
  });
  control_cmd->get_option("--hours")->each([&](const std::string&) {
    control_flags.have_hours = true;
  });

  // ---- stats -------------------------------------------------------------
  struct {
    std::string manifest;
    std::string out;
    double min_speaker_seconds = 0.0;
  } stats_flags;

  auto* stats_cmd =
      app.add_subcommand("stats", "Original-vs-enhanced score tables (bins, groups, means)");
  stats_cmd->add_option("--manifest", stats_flags.manifest, "Doubly scored manifest")->required();
  stats_cmd->add_option("--out", stats_flags.out, "Output directory")->required();
  add_speaker_filter_flag(stats_cmd, stats_flags.min_speaker_seconds);
  stats_cmd->callback([&] {
    action = [&]() {
      const auto records = load_records(stats_flags.manifest, stats_flags.min_speaker_seconds);
      const fs::path out(stats_flags.out);
      const StatsTable bins = bin_stats(records);
      const StatsTable by_sex = group_stats(records, GroupKey::sex);
      const StatsTable by_age = group_stats(records, GroupKey::age_band);
      const MeanDelta delta = mean_delta(records);
      save_stats_csv(bins, "mos_bin", out / "bins.csv");
      save_stats_csv(by_sex, "sex", out / "groups_sex.csv");
      save_stats_csv(by_age, "age_band", out / "groups_age.csv");
      save_mean_delta_csv(delta, out / "mean_delta.csv");

      const auto print_table = [](const char* title, const StatsTable& table) {
        std::printf("%s\n%-12s %10s %10s %8s %8s\n", title, "key", "original", "enhanced", "diff",
                    "count");
        for (const auto& row : table.rows) {
          std::printf("%-12s %10.3f %10.3f %8.3f %8llu\n", row.key.c_str(), row.mean_original,
                      row.mean_enhanced, row.diff, static_cast<unsigned long long>(row.count));
        }
        if (table.excluded > 0) {
          std::printf("(%llu records lacked a score pair)\n",
                      static_cast<unsigned long long>(table.excluded));
        }
      };
      print_table("score bins (by original mos)", bins);
      print_table("by sex", by_sex);
      print_table("by age band", by_age);
      std::printf("mean: original %.3f -> enhanced %.3f (diff %.3f over %llu clips)\n",
                  delta.mean_original, delta.mean_enhanced, delta.diff,
                  static_cast<unsigned long long>(delta.count));
      return 0;
    };
  });

  // ---- histogram ---------------------------------------------------------
  struct {
    std::string manifest;
    std::string side = "enhanced";
    double bin_width = 0.25;
    std::string out;
    double min_speaker_seconds = 0.0;
    bool svg = false;
  } hist_flags;

  auto* hist_cmd = app.add_subcommand("histogram", "Score distribution over [1, 5]");
  hist_cmd->add_option("--manifest", hist_flags.manifest, "Scored manifest")->required();
  hist_cmd->add_option("--side", hist_flags.side, "original or enhanced")
      ->check(CLI::IsMember({"original", "enhanced"}));
  hist_cmd->add_option("--bin-width", hist_flags.bin_width, "Bin width (default 0.25)");
  hist_cmd->add_option("--out", hist_flags.out, "Output directory")->required();
  hist_cmd->add_flag("--svg", hist_flags.svg, "Also write histogram.svg");
  add_speaker_filter_flag(hist_cmd, hist_flags.min_speaker_seconds);
  hist_cmd->callback([&] {
    action = [&]() {
      const auto records = load_records(hist_flags.manifest, hist_flags.min_speaker_seconds);
      const auto bins = score_histogram(
          records, hist_flags.side == "original" ? PathSide::original : PathSide::enhanced,
          hist_flags.bin_width);
      const fs::path out(hist_flags.out);
      save_histogram_csv(bins, out / "histogram.csv");
      if (hist_flags.svg) save_histogram_svg(bins, out / "histogram.svg");
      for (const auto& bin : bins) {
        std::printf("[%s,%s) %llu\n", format_double(bin.lo).c_str(),
                    format_double(bin.hi).c_str(), static_cast<unsigned long long>(bin.count));
      }
      return 0;
    };
  });

  // ---- report ------------------------------------------------------------
  struct {
    std::string scores;
    std::string out;
  } report_flags;

  auto* report_cmd = app.add_subcommand(
      "report", "Format externally produced evaluation scores as an aligned table");
  report_cmd->add_option("--scores", report_flags.scores,
                         "CSV with a header row: label,metric1,metric2,...")
      ->required();
  report_cmd->add_option("--out", report_flags.out, "Output directory")->required();
  report_cmd->callback([&] {
    action = [&]() {
      std::ifstream file(report_flags.scores);
      if (!file) raise(Errc::io_error, "cannot open " + report_flags.scores);
      std::vector<std::vector<std::string>> rows;
      std::string line;
      while (std::getline(file, line)) {
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
      }
      if (rows.empty()) raise(Errc::bad_manifest, "no rows in " + report_flags.scores);

      std::vector<std::size_t> widths;
      for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) {
          widths[c] = std::max(widths[c], row[c].size());
        }
      }
      std::ostringstream table;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < rows[i].size(); ++c) {
          table << (c ? "  " : "");
          table.width(static_cast<std::streamsize>(widths[c]));
          table << std::left << rows[i][c];
        }
        table << '\n';
        if (i == 0) {
          for (std::size_t c = 0; c < widths.size(); ++c) {
            table << (c ? "  " : "") << std::string(widths[c], '-');
          }
          table << '\n';
        }
      }
      const fs::path out(report_flags.out);
      fs::create_directories(out);
      std::ofstream txt(out / "report.txt", std::ios::trunc);
      txt << table.str();
      std::cout << table.str();
      return 0;
    };
  });

  // ---- dispatch ----------------------------------------------------------
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    return action ? action() : 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", errc_name(e.code()), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
