// Copyright 2026 The MiNER Authors.
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

// Declarative JSON recipes driving every command. Unknown keys are rejected
// at every level; relative paths resolve against the recipe's directory.

#ifndef MINER_RECIPE_H_
#define MINER_RECIPE_H_

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "miner/boundary.h"
#include "miner/deslex.h"
#include "miner/llm_baseline.h"
#include "miner/mer.h"
#include "miner/meter.h"
#include "miner/pipeline.h"
#include "miner/protocols.h"

namespace miner {

struct LlmRecipe {
  EndpointConfig endpoint;
  int shots = 2;
  std::filesystem::path cache_dir;  // default: <output_dir>/cache
};

struct Recipe {
  std::filesystem::path corpus;
  Language language = Language::kPt;
  std::filesystem::path output_dir;
  uint64_t split_seed = 42;
  std::optional<DeslexPolicy> deslex;
  BoundaryHyperparams boundary;
  NerHyperparams ner;
  PipelineConfig pipeline;
  std::optional<MeterConfig> meter;
  LlmRecipe llm;
  int k_max = 5;
  int incremental_epochs = 5;
  bool baselines = true;
  // Checkpoints; default to <output_dir>/models/{mbd,mer}.
  std::filesystem::path qa_model;
  std::filesystem::path ner_model;

  // Throws ConfigError (bad values, unknown keys) or SchemaError.
  static Recipe from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  // Throws IoError when unreadable.
  static Recipe load(const std::filesystem::path& path);
  // Effective configuration with absolute paths.
  nlohmann::ordered_json to_json() const;
  // SHA-256 prefix (16 hex chars) of the effective configuration.
  std::string hash() const;
  ProtocolConfig protocol_config() const;
};

}  // namespace miner

#endif  // MINER_RECIPE_H_
