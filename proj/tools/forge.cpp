// Copyright 2026 The Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// forge: build, clean and evaluate ASR training corpora.
//
// Exit codes: 0 success, 1 stage or I/O failure, 2 bad configuration or
// command line.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "forge/eval.hpp"
#include "forge/pipeline.hpp"
#include "forge/stats.hpp"
#include "forge/train_config.hpp"
#include "forge/version.hpp"

namespace {

struct CommonFlags {
  int workers = 0;
  uint64_t seed = 0;
};

forge::StageIo make_io(std::vector<std::string> inputs, std::string output,
                       forge::json options, const CommonFlags& common) {
  forge::StageIo io;
  io.inputs = std::move(inputs);
  io.output = std::move(output);
  io.options = std::move(options);
  io.base_dir = ".";
  io.workers = common.workers;
  io.seed = common.seed;
  return io;
}

void print_outcome(const char* verb, const forge::StageOutcome& outcome) {
  std::printf("%s: %lld in, %lld out\n", verb,
              static_cast<long long>(outcome.records_in),
              static_cast<long long>(outcome.records_out));
  for (const auto& path : outcome.outputs) {
    std::printf("  wrote %s\n", path.string().c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge - speech corpus construction, cleaning and evaluation"};
  app.set_version_flag("--version", std::string("forge ") + forge::kVersion +
                                        " (schema " +
                                        std::to_string(forge::kSchemaVersion) + ")");
  app.require_subcommand(1);
  CommonFlags common;
  app.add_option("--workers", common.workers,
                 "worker threads for per-record stages (0 = all cores)");
  app.add_option("--seed", common.seed, "seed for sampled diagnostics");

  // --- ingest ---------------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "parse subtitles into a segment manifest");
  std::vector<std::string> ingest_inputs;
  std::string ingest_output, ingest_format = "auto", ingest_rules, ingest_source =
                                                                       "nrk_subtitles";
  std::string ingest_language = "unknown";
  int64_t ingest_max_dur = forge::kMaxSegmentMs, ingest_min_gap = 1000;
  int64_t ingest_recording_dur = -1;
  int ingest_stage = 1;
  bool ingest_no_gaps = false, ingest_drop_oversize = false;
  ingest->add_option("inputs", ingest_inputs, ".srt/.vtt files")->required();
  ingest->add_option("-o,--output", ingest_output, "manifest JSONL")->required();
  ingest->add_option("--format", ingest_format, "srt, vtt or auto (default: auto)");
  ingest->add_option("--rules", ingest_rules, "notation rules TOML");
  ingest->add_option("--max-dur", ingest_max_dur, "segment duration cap in ms");
  ingest->add_option("--min-gap", ingest_min_gap, "minimum no-speech gap in ms");
  ingest->add_option("--recording-dur", ingest_recording_dur,
                     "recording length in ms (enables the trailing gap)");
  ingest->add_option("--source", ingest_source, "source tag for emitted segments");
  ingest->add_option("--language", ingest_language, "language tag (nb, nn, en, unknown)");
  ingest->add_option("--stage", ingest_stage, "training stage tag (1 or 2)");
  ingest->add_flag("--skip-no-speech", ingest_no_gaps, "do not emit no-speech segments");
  ingest->add_flag("--drop-oversize", ingest_drop_oversize,
                   "drop single cues longer than the cap");

  // --- align ----------------------------------------------------------------
  auto* align = app.add_subcommand(
      "align", "anchor-align a reference text against a timed hypothesis");
  std::string align_ref, align_hyp, align_output, align_lexicon, align_audio_ref;
  std::string align_source = "audio_books", align_language = "unknown";
  double align_min_quality = 0.8;
  int64_t align_target_dur = forge::kMaxSegmentMs;
  int align_stage = 1;
  align->add_option("--ref", align_ref, "reference text file")->required();
  align->add_option("--hyp", align_hyp, "hypothesis JSONL of timed words")->required();
  align->add_option("-o,--output", align_output, "manifest JSONL")->required();
  align->add_option("--lexicon", align_lexicon, "variant spelling lexicon TSV");
  align->add_option("--min-quality", align_min_quality, "minimum chunk anchor quality");
  align->add_option("--target-dur", align_target_dur, "chunk duration target in ms");
  align->add_option("--audio-ref", align_audio_ref, "audio reference for the segments");
  align->add_option("--source", align_source, "source tag for emitted segments");
  align->add_option("--language", align_language, "language tag");
  align->add_option("--stage", align_stage, "training stage tag (1 or 2)");

  // --- filter ---------------------------------------------------------------
  auto* filter = app.add_subcommand("filter", "apply the cleaning criteria");
  std::string filter_input, filter_output, filter_config, filter_rejects, filter_report;
  filter->add_option("-i,--input", filter_input, "manifest JSONL")->required();
  filter->add_option("-o,--output", filter_output, "kept records JSONL")->required();
  filter->add_option("--config", filter_config, "filter thresholds TOML");
  filter->add_option("--rejects", filter_rejects, "deleted records JSONL");
  filter->add_option("--report", filter_report, "per-criterion counts JSON");

  // --- eval -----------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "score one model's predictions with WER");
  std::string eval_input, eval_output, eval_model, eval_norm = "light";
  eval->add_option("-i,--input", eval_input, "manifest JSONL with predictions")
      ->required();
  eval->add_option("-o,--output", eval_output, "report JSON")->required();
  eval->add_option("--model", eval_model, "model id to score")->required();
  eval->add_option("--norm", eval_norm, "light (default) or none");

  // --- report ---------------------------------------------------------------
  auto* report_cmd = app.add_subcommand("report", "comparison table from eval reports");
  std::vector<std::string> report_inputs;
  std::string report_output, report_layout = "by-size";
  report_cmd->add_option("-i,--input", report_inputs, "eval report JSON files")
      ->required();
  report_cmd->add_option("-o,--output", report_output, "CSV output path");
  report_cmd->add_option("--layout", report_layout, "by-size or by-dataset");

  // --- stats ----------------------------------------------------------------
  auto* stats = app.add_subcommand("stats", "corpus statistics per source and stage");
  std::string stats_input, stats_output;
  stats->add_option("-i,--input", stats_input, "manifest JSONL")->required();
  stats->add_option("-o,--output", stats_output, "stats JSON");

  // --- stats-diff -----------------------------------------------------------
  auto* stats_diff = app.add_subcommand("stats-diff", "per-source retention between runs");
  std::string diff_before, diff_after;
  stats_diff->add_option("before", diff_before, "stats JSON before")->required();
  stats_diff->add_option("after", diff_after, "stats JSON after")->required();

  // --- train-config ---------------------------------------------------------
  auto* train = app.add_subcommand("train-config", "emit a training configuration");
  std::string train_size = "large", train_profile = "nb-whisper", train_output;
  train->add_option("--size", train_size, "tiny, base, small, medium or large");
  train->add_option("--profile", train_profile,
                    "openai-whisper, openai-whisper-large-v3 or nb-whisper");
  train->add_option("-o,--output", train_output, "config JSON")->required();

  // --- run ------------------------------------------------------------------
  auto* run = app.add_subcommand("run", "execute a declarative pipeline");
  std::string run_spec, run_report_path;
  run->add_option("spec", run_spec, "pipeline TOML")->required();
  run->add_option("--report", run_report_path, "write the run report JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*ingest) {
      forge::json opt{{"format", ingest_format},
                      {"max_duration_ms", ingest_max_dur},
                      {"min_gap_ms", ingest_min_gap},
                      {"source", ingest_source},
                      {"language", ingest_language},
                      {"stage", ingest_stage},
                      {"no_speech", !ingest_no_gaps},
                      {"drop_oversize", ingest_drop_oversize}};
      if (!ingest_rules.empty()) opt["rules_file"] = ingest_rules;
      if (ingest_recording_dur >= 0) opt["recording_duration_ms"] = ingest_recording_dur;
      print_outcome("ingest",
                    forge::run_ingest(make_io(ingest_inputs, ingest_output, opt, common)));
    } else if (*align) {
      forge::json opt{{"min_quality", align_min_quality},
                      {"target_duration_ms", align_target_dur},
                      {"source", align_source},
                      {"language", align_language},
                      {"stage", align_stage}};
      if (!align_lexicon.empty()) opt["lexicon"] = align_lexicon;
      if (!align_audio_ref.empty()) opt["audio_ref"] = align_audio_ref;
      print_outcome("align", forge::run_align(make_io({align_ref, align_hyp},
                                                      align_output, opt, common)));
    } else if (*filter) {
      forge::json opt = forge::json::object();
      if (!filter_config.empty()) opt["config"] = filter_config;
      if (!filter_rejects.empty()) opt["rejects"] = filter_rejects;
      if (!filter_report.empty()) opt["report"] = filter_report;
      print_outcome("filter",
                    forge::run_filter(make_io({filter_input}, filter_output, opt, common)));
    } else if (*eval) {
      forge::json opt{{"model", eval_model}, {"norm", eval_norm}};
      print_outcome("eval",
                    forge::run_eval(make_io({eval_input}, eval_output, opt, common)));
    } else if (*report_cmd) {
      forge::ReportLayout layout;
      if (report_layout == "by-size") {
        layout = forge::ReportLayout::BySize;
      } else if (report_layout == "by-dataset") {
        layout = forge::ReportLayout::ByDataset;
      } else {
        throw forge::ConfigError("layout must be by-size or by-dataset");
      }
      std::vector<forge::EvalReport> reports;
      for (const std::string& path : report_inputs) {
        reports.push_back(forge::eval_report_from_json(
            forge::json::parse(forge::read_text_file(path))));
      }
      forge::ComparisonTable table = forge::comparison_report(reports, layout);
      std::fputs(table.text.c_str(), stdout);
      if (!report_output.empty()) {
        forge::atomic_write_file(report_output, table.csv);
        std::printf("  wrote %s\n", report_output.c_str());
      }
    } else if (*stats) {
      forge::CorpusStats corpus_stats =
          forge::compute_stats(forge::read_manifest_file(stats_input));
      std::fputs(forge::render_stats_table(corpus_stats).c_str(), stdout);
      if (!stats_output.empty()) {
        forge::atomic_write_file(stats_output,
                                 forge::stats_to_json(corpus_stats).dump(2) + "\n");
        std::printf("  wrote %s\n", stats_output.c_str());
      }
    } else if (*stats_diff) {
      forge::CorpusStats before = forge::stats_from_json(
          forge::json::parse(forge::read_text_file(diff_before)));
      forge::CorpusStats after =
          forge::stats_from_json(forge::json::parse(forge::read_text_file(diff_after)));
      std::fputs(forge::render_retention(forge::stage_diff(before, after)).c_str(),
                 stdout);
    } else if (*train) {
      forge::json opt{{"size", train_size}, {"profile", train_profile}};
      print_outcome("train-config",
                    forge::run_train_config(make_io({}, train_output, opt, common)));
    } else if (*run) {
      forge::PipelineSpec spec = forge::load_pipeline_file(run_spec);
      if (common.workers > 0) spec.workers = common.workers;
      forge::RunReport run_report = forge::run_pipeline(spec);
      for (const forge::StageResult& r : run_report.stages) {
        std::printf("stage %-18s %8.3fs  %lld in, %lld out\n", r.name.c_str(),
                    r.wall_seconds, static_cast<long long>(r.records_in),
                    static_cast<long long>(r.records_out));
        for (const auto& [path, digest] : r.output_digests) {
          std::printf("  %s  %s\n", digest.c_str(), path.c_str());
        }
      }
      if (!run_report_path.empty()) {
        forge::atomic_write_file(run_report_path,
                                 forge::run_report_to_json(run_report).dump(2) + "\n");
      }
      if (!run_report.ok) {
        std::fprintf(stderr, "stage '%s' failed: %s\n", run_report.failed_stage.c_str(),
                     run_report.error.c_str());
        return 1;
      }
    }
  } catch (const forge::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
