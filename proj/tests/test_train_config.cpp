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

#include <catch2/catch_amalgamated.hpp>

#include "forge/train_config.hpp"

using namespace forge;

TEST_CASE("headline cells") {
  CHECK(emit_config(ModelSize::Large, TrainProfile::NbWhisper).learning_rate == 7e-5);
  TrainConfig tiny_openai = emit_config(ModelSize::Tiny, TrainProfile::OpenAiWhisper);
  CHECK(tiny_openai.learning_rate == 1.5e-3);
  CHECK(tiny_openai.batch_size == 256);
  TrainConfig small_nb = emit_config(ModelSize::Small, TrainProfile::NbWhisper);
  CHECK(small_nb.learning_rate == 2e-4);
  CHECK(small_nb.bpe_dropout == 0.2);
}

TEST_CASE("profile-wide constants") {
  for (ModelSize size : kAllModelSizes) {
    TrainConfig nb = emit_config(size, TrainProfile::NbWhisper);
    CHECK(nb.batch_size == 1024);
    CHECK(nb.updates_stage1 == 200000);
    CHECK(nb.updates_stage2 == 50000);
    CHECK(nb.warmup_updates_stage1 == 10000);
    CHECK(nb.warmup_updates_stage2 == 5000);
    CHECK(nb.weight_decay == 0.01);
    CHECK(nb.activation_dropout == 0.1);
    CHECK(nb.stochastic_depth == 0.0);
    CHECK(nb.weight_init == WeightInit::PretrainedCheckpoint);

    TrainConfig oa = emit_config(size, TrainProfile::OpenAiWhisper);
    CHECK(oa.batch_size == 256);
    CHECK(oa.updates_stage1 == 1048576);
    CHECK(oa.updates_stage2 == 0);
    CHECK(oa.warmup_updates_stage1 == 2048);
    CHECK(oa.weight_decay == 0.1);
    CHECK(oa.bpe_dropout == 0.0);
    CHECK(oa.weight_init == WeightInit::GaussianFanIn);

    TrainConfig v3 = emit_config(size, TrainProfile::OpenAiWhisperLargeV3);
    CHECK(v3.batch_size == 1024);
    CHECK(v3.updates_stage1 == 655360);
    CHECK(v3.bpe_dropout == 0.1);
    CHECK_FALSE(v3.note.empty());

    for (const TrainConfig& cfg : {nb, oa, v3}) {
      CHECK(cfg.max_grad_norm == 1.0);
      CHECK(cfg.optimizer.beta1 == 0.9);
      CHECK(cfg.optimizer.beta2 == 0.98);
      CHECK(cfg.optimizer.epsilon == 1e-6);
      CHECK(cfg.lr_schedule == LrSchedule::LinearDecay);
      // batch size must be a positive power of two
      CHECK(cfg.batch_size > 0);
      CHECK((cfg.batch_size & (cfg.batch_size - 1)) == 0);
      CHECK(cfg.learning_rate > 0);
      CHECK(cfg.bpe_dropout >= 0.0);
      CHECK(cfg.bpe_dropout <= 1.0);
    }
  }
}

TEST_CASE("emit then validate round trips clean for all 15 combinations") {
  for (TrainProfile profile : kAllTrainProfiles) {
    for (ModelSize size : kAllModelSizes) {
      CHECK(validate_config(emit_config(size, profile), profile).empty());
    }
  }
}

TEST_CASE("learning rates strictly decrease with model size per profile") {
  for (TrainProfile profile : kAllTrainProfiles) {
    double prev = 1e9;
    for (ModelSize size : kAllModelSizes) {
      double lr = emit_config(size, profile).learning_rate;
      CHECK(lr < prev);
      prev = lr;
    }
  }
}

TEST_CASE("deviations are named field by field") {
  TrainConfig cfg = emit_config(ModelSize::Large, TrainProfile::NbWhisper);
  cfg.weight_decay = 0.1;
  auto deviations = validate_config(cfg, TrainProfile::NbWhisper);
  REQUIRE(deviations.size() == 1);
  CHECK(deviations[0] == "weight_decay");

  TrainConfig openai = emit_config(ModelSize::Large, TrainProfile::OpenAiWhisper);
  auto cross = validate_config(openai, TrainProfile::NbWhisper);
  CHECK(std::find(cross.begin(), cross.end(), "batch_size") != cross.end());
  CHECK(std::find(cross.begin(), cross.end(), "learning_rate") != cross.end());
}

TEST_CASE("emitted json is flat with a provenance block") {
  json j = train_config_to_json(emit_config(ModelSize::Large, TrainProfile::NbWhisper),
                                TrainProfile::NbWhisper);
  CHECK(j["learning_rate"] == 7e-5);
  CHECK(j["optimizer"] == "adamw");
  CHECK(j["provenance"]["profile"] == "nb-whisper");
  json v3 = train_config_to_json(
      emit_config(ModelSize::Large, TrainProfile::OpenAiWhisperLargeV3),
      TrainProfile::OpenAiWhisperLargeV3);
  CHECK(v3["provenance"].contains("note"));
}

TEST_CASE("name parsing") {
  CHECK(parse_model_size("tiny") == ModelSize::Tiny);
  CHECK_FALSE(parse_model_size("giant"));
  CHECK(parse_train_profile("nb-whisper") == TrainProfile::NbWhisper);
  CHECK(parse_train_profile("openai-whisper-large-v3") ==
        TrainProfile::OpenAiWhisperLargeV3);
  CHECK_FALSE(parse_train_profile("bert"));
  for (TrainProfile p : kAllTrainProfiles) CHECK(parse_train_profile(to_string(p)) == p);
  for (ModelSize s : kAllModelSizes) CHECK(parse_model_size(to_string(s)) == s);
}
