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

#ifndef FORGE_PIPELINE_HPP_
#define FORGE_PIPELINE_HPP_

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "forge/align.hpp"
#include "forge/core.hpp"
#include "forge/eval.hpp"
#include "forge/filters.hpp"
#include "forge/parallel.hpp"
#include "forge/stats.hpp"
#include "forge/subtitle.hpp"
#include "forge/toml.hpp"
#include "forge/train_config.hpp"

namespace forge {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// File plumbing
// ---------------------------------------------------------------------------

inline std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Writes through a temp file in the same directory and renames it into
/// place, so an interrupted run never leaves a half-written file under the
/// final name.
inline void atomic_write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("short write: " + tmp.string());
  }
  fs::rename(tmp, path);
}

/// FNV-1a 64-bit content digest, hex encoded.
inline std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for digest: " + path.string());
  uint64_t h = 14695981039346656037ull;
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

// ---------------------------------------------------------------------------
// Stage runners, shared by the CLI subcommands and the pipeline runner
// ---------------------------------------------------------------------------

struct StageIo {
  std::vector<std::string> inputs;
  std::string output;
  json options = json::object();
  fs::path base_dir = ".";
  int workers = 1;
  uint64_t seed = 0;

  fs::path resolve(std::string_view p) const {
    fs::path fp{std::string(p)};
    return fp.is_absolute() ? fp : base_dir / fp;
  }
};

struct StageOutcome {
  int64_t records_in = 0;
  int64_t records_out = 0;
  std::vector<fs::path> outputs;
};

namespace detail {

inline std::string opt_str(const json& j, const char* key, std::string fallback) {
  return j.contains(key) ? j[key].get<std::string>() : fallback;
}

inline int64_t opt_int(const json& j, const char* key, int64_t fallback) {
  return j.contains(key) ? j[key].get<int64_t>() : fallback;
}

inline bool opt_bool(const json& j, const char* key, bool fallback) {
  return j.contains(key) ? j[key].get<bool>() : fallback;
}

inline double opt_double(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j[key].get<double>() : fallback;
}

inline Language language_option(const json& j) {
  std::string tag = opt_str(j, "language", "unknown");
  auto lang = parse_language(tag);
  if (!lang) throw ConfigError("unknown language tag: " + tag);
  return *lang;
}

inline Stage stage_option(const json& j) {
  int64_t stage = opt_int(j, "stage", 1);
  if (stage != 1 && stage != 2) throw ConfigError("stage must be 1 or 2");
  return static_cast<Stage>(stage);
}

inline NormalizationConfig norm_option(const json& j) {
  std::string norm = opt_str(j, "norm", "light");
  if (norm == "light") return NormalizationConfig::light();
  if (norm == "none") return NormalizationConfig::none();
  throw ConfigError("norm must be 'light' or 'none'");
}

}  // namespace detail

/// Subtitle files in, manifest out: parse, clean, merge, and pull no-speech
/// gaps from the same recordings.
inline StageOutcome run_ingest(const StageIo& io) {
  if (io.inputs.empty()) throw ConfigError("ingest needs at least one subtitle file");
  const json& opt = io.options;
  NotationRules rules = NotationRules::defaults();
  if (opt.contains("rules_file")) {
    rules = notation_rules_from_json(
        toml::parse_file(io.resolve(opt["rules_file"].get<std::string>()).string()));
  } else if (opt.contains("rules")) {
    rules = notation_rules_from_json(opt["rules"]);
  }
  const int64_t max_dur = detail::opt_int(opt, "max_duration_ms", kMaxSegmentMs);
  const int64_t min_gap = detail::opt_int(opt, "min_gap_ms", 1000);
  const bool no_speech = detail::opt_bool(opt, "no_speech", true);
  const bool drop_oversize = detail::opt_bool(opt, "drop_oversize", false);
  const std::string format_opt = detail::opt_str(opt, "format", "auto");
  const SourceTag source =
      SourceTag::parse(detail::opt_str(opt, "source", "nrk_subtitles"));
  const Language language = detail::language_option(opt);
  const Stage stage = detail::stage_option(opt);

  StageOutcome outcome;
  std::string out_text;
  for (const std::string& input : io.inputs) {
    const fs::path path = io.resolve(input);
    SubtitleFormat format = SubtitleFormat::Srt;
    if (format_opt == "srt") {
      format = SubtitleFormat::Srt;
    } else if (format_opt == "vtt") {
      format = SubtitleFormat::Vtt;
    } else if (format_opt == "auto") {
      format = subtitle_format_for_path(path.string());
    } else {
      throw ConfigError("format must be srt, vtt or auto");
    }
    ParsedSubtitles parsed =
        parse_subtitles(read_text_file(path), format, path.filename().string());
    outcome.records_in += static_cast<int64_t>(parsed.cues.size());
    std::vector<SubtitleCue> cleaned = clean_cues(parsed.cues, rules);

    MergeContext ctx;
    ctx.audio_ref = path.stem().string();
    ctx.source = source;
    ctx.language = language;
    ctx.stage = stage;
    std::vector<MergedSegment> merged = merge_segments(cleaned, ctx, max_dur);

    std::vector<ManifestRecord> records;
    for (MergedSegment& m : merged) {
      if (m.oversize && drop_oversize) continue;
      ManifestRecord rec;
      rec.segment = std::move(m.segment);
      if (m.oversize) rec.extra["oversize"] = true;
      records.push_back(std::move(rec));
    }
    if (no_speech) {
      int64_t recording_dur = detail::opt_int(opt, "recording_duration_ms",
                                              cleaned.empty() ? 0 : cleaned.back().end_ms);
      for (Segment& seg : extract_no_speech(cleaned, recording_dur, min_gap, ctx, max_dur)) {
        ManifestRecord rec;
        rec.segment = std::move(seg);
        records.push_back(std::move(rec));
      }
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const ManifestRecord& a, const ManifestRecord& b) {
                       return a.segment.start_ms < b.segment.start_ms;
                     });
    for (const ManifestRecord& rec : records) {
      out_text += serialize_record(rec);
      out_text += '\n';
    }
    outcome.records_out += static_cast<int64_t>(records.size());
  }
  const fs::path out_path = io.resolve(io.output);
  atomic_write_file(out_path, out_text);
  outcome.outputs.push_back(out_path);
  return outcome;
}

/// Reference text plus a timestamped hypothesis in, aligned-chunk manifest
/// out.  Tokens are normalized for matching; chunk text keeps the original
/// reference spelling.
inline StageOutcome run_align(const StageIo& io) {
  if (io.inputs.size() != 2) {
    throw ConfigError("align needs exactly two inputs: reference text, hypothesis jsonl");
  }
  const json& opt = io.options;
  const std::string ref_text = read_text_file(io.resolve(io.inputs[0]));
  std::vector<std::string> raw_tokens = tokenize(ref_text, NormalizationConfig::none());

  std::vector<TimedWord> hyp_words;
  {
    const fs::path hyp_path = io.resolve(io.inputs[1]);
    std::ifstream in(hyp_path, std::ios::binary);
    if (!in) throw Error("cannot open hypothesis file: " + hyp_path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      try {
        json j = json::parse(line);
        hyp_words.push_back(TimedWord{j.at("word").get<std::string>(),
                                      j.at("start_ms").get<int64_t>(),
                                      j.at("end_ms").get<int64_t>()});
      } catch (const json::exception& e) {
        throw ParseError(hyp_path.filename().string() + ":" + std::to_string(lineno) +
                         ": " + e.what());
      }
    }
  }
  if (raw_tokens.empty() || hyp_words.empty()) {
    throw Error("alignment needs non-empty reference and hypothesis");
  }

  const auto norm_token = [](const std::string& t) {
    return normalize(t, NormalizationConfig::light());
  };
  std::vector<std::string> ref_norm(raw_tokens.size());
  for (size_t i = 0; i < raw_tokens.size(); ++i) ref_norm[i] = norm_token(raw_tokens[i]);
  std::vector<std::string> hyp_norm(hyp_words.size());
  for (size_t i = 0; i < hyp_words.size(); ++i) hyp_norm[i] = norm_token(hyp_words[i].word);

  VariantEquivalence eq;
  if (opt.contains("lexicon")) {
    eq = variant_equivalence(
        read_variant_lexicon_file(io.resolve(opt["lexicon"].get<std::string>()).string()));
  }
  WordAlignment alignment = align_words(std::span(ref_norm), std::span(hyp_norm), eq);

  ChunkOptions chunk_opts;
  chunk_opts.target_duration_ms = detail::opt_int(opt, "target_duration_ms", kMaxSegmentMs);
  chunk_opts.min_anchor_quality = detail::opt_double(opt, "min_quality", 0.8);
  std::vector<AlignedChunk> chunks =
      extract_chunks(alignment, hyp_words, raw_tokens, chunk_opts);

  const std::string audio_ref = detail::opt_str(
      opt, "audio_ref", fs::path(io.inputs[0]).stem().string());
  const SourceTag source = SourceTag::parse(detail::opt_str(opt, "source", "audio_books"));
  const Language language = detail::language_option(opt);
  const Stage stage = detail::stage_option(opt);

  std::string out_text;
  int counter = 0;
  for (const AlignedChunk& chunk : chunks) {
    ManifestRecord rec;
    char idbuf[32];
    std::snprintf(idbuf, sizeof(idbuf), "%04d", ++counter);
    rec.segment.id = audio_ref + "-" + idbuf;
    rec.segment.audio_ref = audio_ref;
    rec.segment.start_ms = chunk.start_ms;
    rec.segment.end_ms = chunk.end_ms;
    rec.segment.text = chunk.text;
    rec.segment.source = source;
    rec.segment.language = language;
    rec.segment.stage = stage;
    rec.extra["anchor_quality"] = chunk.anchor_quality;
    out_text += serialize_record(rec);
    out_text += '\n';
  }
  const fs::path out_path = io.resolve(io.output);
  atomic_write_file(out_path, out_text);
  StageOutcome outcome;
  outcome.records_in = static_cast<int64_t>(raw_tokens.size());
  outcome.records_out = static_cast<int64_t>(chunks.size());
  outcome.outputs.push_back(out_path);
  return outcome;
}

/// Manifest in, kept/rejected manifests plus a per-criterion report out.
/// Records are judged concurrently; output order matches input order.
inline StageOutcome run_filter(const StageIo& io) {
  if (io.inputs.size() != 1) throw ConfigError("filter needs exactly one input manifest");
  const json& opt = io.options;
  FilterConfig cfg;
  if (opt.contains("config")) {
    cfg = filter_config_from_json(
        toml::parse_file(io.resolve(opt["config"].get<std::string>()).string()));
  } else {
    cfg = filter_config_from_json(opt);
  }
  std::vector<ManifestRecord> records =
      read_manifest_file(io.resolve(io.inputs[0]).string());
  std::vector<FilterVerdict> verdicts = parallel_map(
      records, io.workers,
      [&cfg](const ManifestRecord& rec) { return apply_filters(rec, cfg); });

  std::string kept_text, rejects_text;
  std::map<std::string, int64_t> violation_counts;
  std::vector<std::string> rejected_ids;
  int64_t kept = 0, ms_removed = 0;
  for (size_t i = 0; i < records.size(); ++i) {
    if (verdicts[i].keep) {
      ++kept;
      kept_text += serialize_record(records[i]);
      kept_text += '\n';
    } else {
      ManifestRecord rec = records[i];
      json violations = json::array();
      for (const FilterViolation& v : verdicts[i].violations) {
        violations.push_back({{"criterion", to_string(v.criterion)}, {"detail", v.detail}});
        ++violation_counts[to_string(v.criterion)];
      }
      rec.extra["filter_violations"] = std::move(violations);
      rejects_text += serialize_record(rec);
      rejects_text += '\n';
      rejected_ids.push_back(rec.segment.id);
      ms_removed += rec.segment.duration_ms();
    }
  }

  StageOutcome outcome;
  outcome.records_in = static_cast<int64_t>(records.size());
  outcome.records_out = kept;
  const fs::path kept_path = io.resolve(io.output);
  atomic_write_file(kept_path, kept_text);
  outcome.outputs.push_back(kept_path);
  if (opt.contains("rejects")) {
    const fs::path p = io.resolve(opt["rejects"].get<std::string>());
    atomic_write_file(p, rejects_text);
    outcome.outputs.push_back(p);
  }
  if (opt.contains("report")) {
    // A seeded sample of rejected ids gives the report a few concrete
    // examples without dumping the whole reject list.
    std::vector<std::string> sample;
    std::mt19937_64 rng(io.seed);
    std::sample(rejected_ids.begin(), rejected_ids.end(), std::back_inserter(sample), 5,
                rng);
    json report{{"input_records", records.size()},
                {"kept_records", kept},
                {"rejected_records", records.size() - kept},
                {"violations", violation_counts},
                {"ms_removed", ms_removed},
                {"hours_removed", ms_to_hours(ms_removed)},
                {"sample_rejected_ids", sample}};
    const fs::path p = io.resolve(opt["report"].get<std::string>());
    atomic_write_file(p, report.dump(2) + "\n");
    outcome.outputs.push_back(p);
  }
  return outcome;
}

/// Manifest in, WER report out, grouped by (source, language) with pooled
/// counts.
inline StageOutcome run_eval(const StageIo& io) {
  if (io.inputs.size() != 1) throw ConfigError("eval needs exactly one input manifest");
  const json& opt = io.options;
  if (!opt.contains("model")) throw ConfigError("eval needs a model id (option 'model')");
  const std::string model_id = opt["model"].get<std::string>();
  const NormalizationConfig norm = detail::norm_option(opt);
  std::vector<ManifestRecord> records =
      read_manifest_file(io.resolve(io.inputs[0]).string());
  EvalReport report = evaluate_manifest(records, model_id, norm, io.workers);
  const fs::path out_path = io.resolve(io.output);
  atomic_write_file(out_path, eval_report_to_json(report).dump(2) + "\n");
  StageOutcome outcome;
  outcome.records_in = static_cast<int64_t>(records.size());
  outcome.records_out = static_cast<int64_t>(report.groups.size());
  outcome.outputs.push_back(out_path);
  return outcome;
}

/// Manifest in, corpus statistics out.
inline StageOutcome run_stats(const StageIo& io) {
  if (io.inputs.size() != 1) throw ConfigError("stats needs exactly one input manifest");
  std::vector<ManifestRecord> records =
      read_manifest_file(io.resolve(io.inputs[0]).string());
  CorpusStats stats = compute_stats(records);
  const fs::path out_path = io.resolve(io.output);
  atomic_write_file(out_path, stats_to_json(stats).dump(2) + "\n");
  StageOutcome outcome;
  outcome.records_in = static_cast<int64_t>(records.size());
  outcome.records_out = static_cast<int64_t>(stats.cells.size());
  outcome.outputs.push_back(out_path);
  return outcome;
}

/// Emits the published training configuration for a size/profile pair.
inline StageOutcome run_train_config(const StageIo& io) {
  const json& opt = io.options;
  auto size = parse_model_size(detail::opt_str(opt, "size", "large"));
  if (!size) throw ConfigError("unknown model size");
  auto profile = parse_train_profile(detail::opt_str(opt, "profile", "nb-whisper"));
  if (!profile) throw ConfigError("unknown training profile");
  TrainConfig cfg = emit_config(*size, *profile);
  const fs::path out_path = io.resolve(io.output);
  atomic_write_file(out_path, train_config_to_json(cfg, *profile).dump(2) + "\n");
  StageOutcome outcome;
  outcome.records_out = 1;
  outcome.outputs.push_back(out_path);
  return outcome;
}

// ---------------------------------------------------------------------------
// Pipeline spec
// ---------------------------------------------------------------------------

struct StageSpec {
  std::string kind;
  std::string name;
  std::vector<std::string> inputs;
  std::string output;
  json options = json::object();
};

struct PipelineSpec {
  int workers = 0;  // 0 = hardware concurrency
  uint64_t seed = 0;
  std::vector<StageSpec> stages;
  fs::path base_dir = ".";
};

inline constexpr const char* kStageKinds[] = {"ingest", "align",  "filter",
                                              "eval",   "stats",  "train_config"};

inline StageOutcome run_stage(const StageSpec& stage, const PipelineSpec& spec) {
  StageIo io;
  io.inputs = stage.inputs;
  io.output = stage.output;
  io.options = stage.options;
  io.base_dir = spec.base_dir;
  io.workers = spec.workers;
  io.seed = spec.seed;
  if (stage.kind == "ingest") return run_ingest(io);
  if (stage.kind == "align") return run_align(io);
  if (stage.kind == "filter") return run_filter(io);
  if (stage.kind == "eval") return run_eval(io);
  if (stage.kind == "stats") return run_stats(io);
  if (stage.kind == "train_config") return run_train_config(io);
  throw ConfigError("unknown stage kind: " + stage.kind);
}

/// Output paths a stage will write, including auxiliary ones.
inline std::vector<std::string> stage_outputs(const StageSpec& stage) {
  std::vector<std::string> outputs{stage.output};
  if (stage.kind == "filter") {
    for (const char* key : {"rejects", "report"}) {
      if (stage.options.contains(key)) {
        outputs.push_back(stage.options[key].get<std::string>());
      }
    }
  }
  return outputs;
}

inline PipelineSpec pipeline_from_json(const json& j, fs::path base_dir) {
  PipelineSpec spec;
  spec.base_dir = std::move(base_dir);
  if (j.contains("global")) {
    const json& g = j["global"];
    spec.workers = static_cast<int>(detail::opt_int(g, "workers", 0));
    spec.seed = static_cast<uint64_t>(detail::opt_int(g, "seed", 0));
  }
  if (!j.contains("stage")) return spec;
  if (!j["stage"].is_array()) throw ConfigError("expected [[stage]] blocks");
  int idx = 0;
  for (const json& sj : j["stage"]) {
    ++idx;
    StageSpec stage;
    if (!sj.contains("kind")) {
      throw ConfigError("stage #" + std::to_string(idx) + " is missing 'kind'");
    }
    stage.kind = sj["kind"].get<std::string>();
    if (stage.kind == "train-config") stage.kind = "train_config";
    stage.name = detail::opt_str(sj, "name", stage.kind + "-" + std::to_string(idx));
    if (sj.contains("inputs")) stage.inputs = sj["inputs"].get<std::vector<std::string>>();
    if (sj.contains("output")) stage.output = sj["output"].get<std::string>();
    if (sj.contains("options")) stage.options = sj["options"];
    spec.stages.push_back(std::move(stage));
  }
  return spec;
}

inline PipelineSpec load_pipeline_file(const std::string& path) {
  fs::path p(path);
  json j = toml::parse_file(path);
  return pipeline_from_json(j, p.has_parent_path() ? p.parent_path() : fs::path("."));
}

/// Static checks before anything runs: stage kinds are known, every input
/// either already exists or is produced by an earlier stage (an input coming
/// from a later stage is a dependency cycle), and no two stages write the
/// same file.
inline std::vector<std::string> validate_pipeline(const PipelineSpec& spec) {
  std::vector<std::string> problems;
  std::set<std::string> produced_earlier;
  std::map<std::string, std::string> produced_later;  // path -> stage name
  for (size_t s = spec.stages.size(); s-- > 0;) {
    for (const std::string& out : stage_outputs(spec.stages[s])) {
      produced_later[out] = spec.stages[s].name;
    }
  }
  std::set<std::string> all_outputs;
  for (const StageSpec& stage : spec.stages) {
    bool known = false;
    for (const char* kind : kStageKinds) known |= (stage.kind == kind);
    if (!known) {
      problems.push_back("stage '" + stage.name + "': unknown kind '" + stage.kind + "'");
    }
    if (stage.output.empty()) {
      problems.push_back("stage '" + stage.name + "': missing output");
    }
    for (const std::string& out : stage_outputs(stage)) {
      if (!all_outputs.insert(out).second) {
        problems.push_back("stage '" + stage.name + "': output '" + out +
                           "' is written by more than one stage");
      }
      produced_later.erase(out);
    }
    for (const std::string& input : stage.inputs) {
      if (produced_earlier.count(input)) continue;
      const fs::path resolved =
          fs::path(input).is_absolute() ? fs::path(input) : spec.base_dir / input;
      if (fs::exists(resolved)) continue;
      auto later = produced_later.find(input);
      if (later != produced_later.end()) {
        problems.push_back("stage '" + stage.name + "': input '" + input +
                           "' is produced by the later stage '" + later->second +
                           "' (dependency cycle)");
      } else {
        problems.push_back("stage '" + stage.name + "': input '" + input +
                           "' does not exist and no earlier stage produces it");
      }
    }
    for (const std::string& out : stage_outputs(stage)) produced_earlier.insert(out);
  }
  return problems;
}

// ---------------------------------------------------------------------------
// Pipeline runner
// ---------------------------------------------------------------------------

struct StageResult {
  std::string name;
  std::string kind;
  double wall_seconds = 0;
  int64_t records_in = 0;
  int64_t records_out = 0;
  std::map<std::string, std::string> output_digests;  // path -> digest
};

struct RunReport {
  std::vector<StageResult> stages;
  bool ok = true;
  std::string failed_stage;
  std::string error;
};

/// Runs stages in spec order.  A failing stage stops everything downstream;
/// outputs of completed stages stay in place.  Throws ConfigError when the
/// spec does not validate.
inline RunReport run_pipeline(const PipelineSpec& spec) {
  std::vector<std::string> problems = validate_pipeline(spec);
  if (!problems.empty()) {
    std::string msg = "pipeline spec is invalid:";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  RunReport report;
  for (const StageSpec& stage : spec.stages) {
    StageResult result;
    result.name = stage.name;
    result.kind = stage.kind;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      StageOutcome outcome = run_stage(stage, spec);
      result.records_in = outcome.records_in;
      result.records_out = outcome.records_out;
      for (const fs::path& p : outcome.outputs) {
        result.output_digests[p.string()] = file_digest(p);
      }
    } catch (const std::exception& e) {
      report.ok = false;
      report.failed_stage = stage.name;
      report.error = e.what();
      report.stages.push_back(std::move(result));
      break;
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.stages.push_back(std::move(result));
  }
  return report;
}

inline json run_report_to_json(const RunReport& report) {
  json stages = json::array();
  for (const StageResult& r : report.stages) {
    stages.push_back({{"name", r.name},
                      {"kind", r.kind},
                      {"wall_seconds", r.wall_seconds},
                      {"records_in", r.records_in},
                      {"records_out", r.records_out},
                      {"output_digests", r.output_digests}});
  }
  json j{{"ok", report.ok}, {"stages", std::move(stages)}};
  if (!report.ok) {
    j["failed_stage"] = report.failed_stage;
    j["error"] = report.error;
  }
  return j;
}

}  // namespace forge

#endif  // FORGE_PIPELINE_HPP_
