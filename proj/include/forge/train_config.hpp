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

#ifndef FORGE_TRAIN_CONFIG_HPP_
#define FORGE_TRAIN_CONFIG_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/core.hpp"

namespace forge {

enum class ModelSize { Tiny, Base, Small, Medium, Large };
enum class TrainProfile { OpenAiWhisper, OpenAiWhisperLargeV3, NbWhisper };
enum class LrSchedule { LinearDecay };
enum class WeightInit { PretrainedCheckpoint, GaussianFanIn };

inline constexpr ModelSize kAllModelSizes[] = {ModelSize::Tiny, ModelSize::Base,
                                               ModelSize::Small, ModelSize::Medium,
                                               ModelSize::Large};
inline constexpr TrainProfile kAllTrainProfiles[] = {TrainProfile::OpenAiWhisper,
                                                     TrainProfile::OpenAiWhisperLargeV3,
                                                     TrainProfile::NbWhisper};

inline std::string to_string(ModelSize s) {
  switch (s) {
    case ModelSize::Tiny: return "tiny";
    case ModelSize::Base: return "base";
    case ModelSize::Small: return "small";
    case ModelSize::Medium: return "medium";
    case ModelSize::Large: return "large";
  }
  return "large";
}

inline std::optional<ModelSize> parse_model_size(std::string_view s) {
  if (s == "tiny") return ModelSize::Tiny;
  if (s == "base") return ModelSize::Base;
  if (s == "small") return ModelSize::Small;
  if (s == "medium") return ModelSize::Medium;
  if (s == "large") return ModelSize::Large;
  return std::nullopt;
}

inline std::string to_string(TrainProfile p) {
  switch (p) {
    case TrainProfile::OpenAiWhisper: return "openai-whisper";
    case TrainProfile::OpenAiWhisperLargeV3: return "openai-whisper-large-v3";
    case TrainProfile::NbWhisper: return "nb-whisper";
  }
  return "nb-whisper";
}

inline std::optional<TrainProfile> parse_train_profile(std::string_view s) {
  if (s == "openai-whisper") return TrainProfile::OpenAiWhisper;
  if (s == "openai-whisper-large-v3") return TrainProfile::OpenAiWhisperLargeV3;
  if (s == "nb-whisper") return TrainProfile::NbWhisper;
  return std::nullopt;
}

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.98;
  double epsilon = 1e-6;

  bool operator==(const AdamConfig&) const = default;
};

/// Scalar training setup for one model size under one profile.  Two-stage
/// profiles carry separate update and warmup budgets per stage; single-stage
/// profiles leave the stage-2 fields at zero.
struct TrainConfig {
  ModelSize model_size = ModelSize::Large;
  double learning_rate = 0;
  int batch_size = 0;
  int warmup_updates_stage1 = 0;
  int warmup_updates_stage2 = 0;
  int updates_stage1 = 0;
  int updates_stage2 = 0;
  double max_grad_norm = 1.0;
  AdamConfig optimizer;
  double weight_decay = 0;
  double bpe_dropout = 0;
  double activation_dropout = 0;
  double stochastic_depth = 0;
  LrSchedule lr_schedule = LrSchedule::LinearDecay;
  WeightInit weight_init = WeightInit::GaussianFanIn;
  std::string note;  // caveats that travel with the emitted file

  bool operator==(const TrainConfig&) const = default;
};

/// The published training setup, cell for cell.
inline TrainConfig emit_config(ModelSize size, TrainProfile profile) {
  TrainConfig cfg;
  cfg.model_size = size;
  switch (profile) {
    case TrainProfile::OpenAiWhisper:
      switch (size) {
        case ModelSize::Tiny: cfg.learning_rate = 1.5e-3; break;
        case ModelSize::Base: cfg.learning_rate = 1e-3; break;
        case ModelSize::Small: cfg.learning_rate = 5e-4; break;
        case ModelSize::Medium: cfg.learning_rate = 2.5e-4; break;
        case ModelSize::Large: cfg.learning_rate = 2e-4; break;
      }
      cfg.batch_size = 256;
      cfg.warmup_updates_stage1 = 2048;
      cfg.updates_stage1 = 1'048'576;
      cfg.weight_decay = 0.1;
      cfg.bpe_dropout = 0;
      cfg.activation_dropout = 0;
      cfg.weight_init = WeightInit::GaussianFanIn;
      break;
    case TrainProfile::OpenAiWhisperLargeV3:
      // The published learning-rate schedule lists no separate v3 column;
      // the v1/v2 rates apply.
      switch (size) {
        case ModelSize::Tiny: cfg.learning_rate = 1.5e-3; break;
        case ModelSize::Base: cfg.learning_rate = 1e-3; break;
        case ModelSize::Small: cfg.learning_rate = 5e-4; break;
        case ModelSize::Medium: cfg.learning_rate = 2.5e-4; break;
        case ModelSize::Large: cfg.learning_rate = 2e-4; break;
      }
      cfg.batch_size = 1024;
      cfg.warmup_updates_stage1 = 2048;
      cfg.updates_stage1 = 655'360;
      cfg.weight_decay = 0.1;
      cfg.bpe_dropout = 0.1;
      cfg.activation_dropout = 0;
      cfg.weight_init = WeightInit::GaussianFanIn;
      cfg.note =
          "update count is the one reported for large-v2; the v3 step count "
          "has not been disclosed";
      break;
    case TrainProfile::NbWhisper:
      switch (size) {
        case ModelSize::Tiny: cfg.learning_rate = 6e-4; break;
        case ModelSize::Base: cfg.learning_rate = 4e-4; break;
        case ModelSize::Small: cfg.learning_rate = 2e-4; break;
        case ModelSize::Medium: cfg.learning_rate = 1e-4; break;
        case ModelSize::Large: cfg.learning_rate = 7e-5; break;
      }
      cfg.batch_size = 1024;
      cfg.warmup_updates_stage1 = 10'000;
      cfg.warmup_updates_stage2 = 5'000;
      cfg.updates_stage1 = 200'000;
      cfg.updates_stage2 = 50'000;
      cfg.weight_decay = 0.01;
      cfg.bpe_dropout = 0.2;
      cfg.activation_dropout = 0.1;
      cfg.weight_init = WeightInit::PretrainedCheckpoint;
      break;
  }
  cfg.max_grad_norm = 1.0;
  cfg.stochastic_depth = 0;
  cfg.lr_schedule = LrSchedule::LinearDecay;
  return cfg;
}

/// Field-by-field comparison against the profile's published values; each
/// deviation names the field.  Empty means an exact match.
inline std::vector<std::string> validate_config(const TrainConfig& cfg,
                                                TrainProfile profile) {
  const TrainConfig want = emit_config(cfg.model_size, profile);
  std::vector<std::string> deviations;
  const auto check = [&](bool same, const char* field) {
    if (!same) deviations.push_back(field);
  };
  check(cfg.learning_rate == want.learning_rate, "learning_rate");
  check(cfg.batch_size == want.batch_size, "batch_size");
  check(cfg.warmup_updates_stage1 == want.warmup_updates_stage1, "warmup_updates_stage1");
  check(cfg.warmup_updates_stage2 == want.warmup_updates_stage2, "warmup_updates_stage2");
  check(cfg.updates_stage1 == want.updates_stage1, "updates_stage1");
  check(cfg.updates_stage2 == want.updates_stage2, "updates_stage2");
  check(cfg.max_grad_norm == want.max_grad_norm, "max_grad_norm");
  check(cfg.optimizer == want.optimizer, "optimizer");
  check(cfg.weight_decay == want.weight_decay, "weight_decay");
  check(cfg.bpe_dropout == want.bpe_dropout, "bpe_dropout");
  check(cfg.activation_dropout == want.activation_dropout, "activation_dropout");
  check(cfg.stochastic_depth == want.stochastic_depth, "stochastic_depth");
  check(cfg.lr_schedule == want.lr_schedule, "lr_schedule");
  check(cfg.weight_init == want.weight_init, "weight_init");
  return deviations;
}

/// Flat key/value form with a provenance block naming the profile column the
/// values came from.
inline json train_config_to_json(const TrainConfig& cfg, TrainProfile profile) {
  json j{{"model_size", to_string(cfg.model_size)},
         {"learning_rate", cfg.learning_rate},
         {"batch_size", cfg.batch_size},
         {"warmup_updates_stage1", cfg.warmup_updates_stage1},
         {"warmup_updates_stage2", cfg.warmup_updates_stage2},
         {"updates_stage1", cfg.updates_stage1},
         {"updates_stage2", cfg.updates_stage2},
         {"max_grad_norm", cfg.max_grad_norm},
         {"optimizer", "adamw"},
         {"adam_beta1", cfg.optimizer.beta1},
         {"adam_beta2", cfg.optimizer.beta2},
         {"adam_epsilon", cfg.optimizer.epsilon},
         {"weight_decay", cfg.weight_decay},
         {"bpe_dropout", cfg.bpe_dropout},
         {"activation_dropout", cfg.activation_dropout},
         {"stochastic_depth", cfg.stochastic_depth},
         {"lr_schedule", "linear_decay"},
         {"weight_init", cfg.weight_init == WeightInit::PretrainedCheckpoint
                             ? "pretrained_checkpoint"
                             : "gaussian_fan_in"}};
  json provenance{{"profile", to_string(profile)},
                  {"tables", json::array({"learning_rates", "hyperparameters"})}};
  if (!cfg.note.empty()) provenance["note"] = cfg.note;
  j["provenance"] = std::move(provenance);
  return j;
}

}  // namespace forge

#endif  // FORGE_TRAIN_CONFIG_HPP_
