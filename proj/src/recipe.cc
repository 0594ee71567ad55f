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

#include "miner/recipe.h"

#include <fstream>
#include <set>

#include "miner/errors.h"
#include "miner/hash.h"

namespace miner {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void check_object(const json& j, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
}

// Allowed keys are those of the default configuration's serialization.
void check_keys(const json& j, const std::set<std::string>& allowed, std::string_view where) {
  check_object(j, where);
  for (const auto& [key, v] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

std::set<std::string> keys_of(const ordered_json& j) {
  std::set<std::string> out;
  for (const auto& [key, v] : j.items()) out.insert(key);
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.empty() || path.is_absolute()) return path;
  return (base / path).lexically_normal();
}

}  // namespace

Recipe Recipe::from_json(const json& j, const std::filesystem::path& base_dir) {
  check_keys(j,
             {"corpus", "language", "output_dir", "split", "deslex", "boundary", "ner", "pipeline",
              "meter", "llm", "incremental", "baselines", "models"},
             "recipe");
  Recipe r;
  try {
    if (!j.contains("corpus")) throw ConfigError("recipe: 'corpus' is required");
    r.corpus = resolve(base_dir, j.at("corpus").get<std::string>());
    r.language = parse_language(j.value("language", std::string("pt")));
    r.output_dir = resolve(base_dir, j.value("output_dir", std::string("out")));

    if (j.contains("split")) {
      check_keys(j["split"], {"seed"}, "split");
      r.split_seed = j["split"].value("seed", r.split_seed);
    }
    if (j.contains("deslex")) {
      const json& d = j["deslex"];
      std::set<std::string> allowed = keys_of(DeslexPolicy{}.to_json());
      allowed.insert("enabled");
      check_keys(d, allowed, "deslex");
      if (d.value("enabled", true)) {
        json policy = d;
        policy.erase("enabled");
        r.deslex = DeslexPolicy::from_json(policy);
        r.deslex->validate(r.language);
      }
    }
    if (j.contains("boundary")) {
      check_keys(j["boundary"], keys_of(BoundaryHyperparams{}.to_json()), "boundary");
      r.boundary = BoundaryHyperparams::from_json(j["boundary"]);
    }
    if (j.contains("ner")) {
      check_keys(j["ner"], keys_of(NerHyperparams{}.to_json()), "ner");
      r.ner = NerHyperparams::from_json(j["ner"]);
    }
    if (j.contains("pipeline")) {
      check_keys(j["pipeline"], {"null_threshold", "strict_overlap"}, "pipeline");
      r.pipeline.null_threshold = j["pipeline"].value("null_threshold", 0.0);
      r.pipeline.strict_overlap = j["pipeline"].value("strict_overlap", false);
    }
    if (j.contains("meter") && !j["meter"].is_null()) {
      r.meter = MeterConfig::from_json(j["meter"]);
      r.meter->validate();
    }
    r.llm.cache_dir = r.output_dir / "cache";
    if (j.contains("llm")) {
      const json& l = j["llm"];
      check_keys(l, {"endpoint", "shots", "cache_dir"}, "llm");
      if (l.contains("endpoint")) r.llm.endpoint = EndpointConfig::from_json(l["endpoint"]);
      if (!r.llm.endpoint.mock_dir.empty()) {
        r.llm.endpoint.mock_dir = resolve(base_dir, r.llm.endpoint.mock_dir.string());
      }
      r.llm.shots = l.value("shots", r.llm.shots);
      if (r.llm.shots < 0) throw ConfigError("llm: shots must be non-negative");
      if (l.contains("cache_dir")) {
        r.llm.cache_dir = resolve(base_dir, l["cache_dir"].get<std::string>());
      }
    }
    if (j.contains("incremental")) {
      check_keys(j["incremental"], {"k_max", "epochs"}, "incremental");
      r.k_max = j["incremental"].value("k_max", r.k_max);
      r.incremental_epochs = j["incremental"].value("epochs", r.incremental_epochs);
      if (r.k_max < 0 || r.incremental_epochs < 1) {
        throw ConfigError("incremental: k_max must be >= 0 and epochs >= 1");
      }
    }
    r.baselines = j.value("baselines", r.baselines);
    r.qa_model = r.output_dir / "models" / "mbd";
    r.ner_model = r.output_dir / "models" / "mer";
    if (j.contains("models")) {
      check_keys(j["models"], {"mbd", "mer"}, "models");
      if (j["models"].contains("mbd")) {
        r.qa_model = resolve(base_dir, j["models"]["mbd"].get<std::string>());
      }
      if (j["models"].contains("mer")) {
        r.ner_model = resolve(base_dir, j["models"]["mer"].get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("recipe: ") + e.what());
  }
  return r;
}

Recipe Recipe::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read recipe '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("recipe '" + path.string() + "' is not valid JSON: " + e.what());
  }
  std::filesystem::path base = std::filesystem::absolute(path).parent_path();
  return from_json(j, base);
}

ordered_json Recipe::to_json() const {
  ordered_json j;
  j["corpus"] = corpus.string();
  j["language"] = language_code(language);
  j["output_dir"] = output_dir.string();
  j["split"] = {{"seed", split_seed}};
  if (deslex) {
    ordered_json d{{"enabled", true}};
    d.update(deslex->to_json());
    j["deslex"] = d;
  } else {
    j["deslex"] = {{"enabled", false}};
  }
  j["boundary"] = boundary.to_json();
  j["ner"] = ner.to_json();
  j["pipeline"] = {{"null_threshold", pipeline.null_threshold},
                   {"strict_overlap", pipeline.strict_overlap}};
  j["meter"] = meter ? meter->to_json() : ordered_json(nullptr);
  j["llm"] = {{"endpoint", llm.endpoint.to_json()},
              {"shots", llm.shots},
              {"cache_dir", llm.cache_dir.string()}};
  j["incremental"] = {{"k_max", k_max}, {"epochs", incremental_epochs}};
  j["baselines"] = baselines;
  j["models"] = {{"mbd", qa_model.string()}, {"mer", ner_model.string()}};
  return j;
}

std::string Recipe::hash() const { return sha256_hex(to_json().dump()).substr(0, 16); }

ProtocolConfig Recipe::protocol_config() const {
  ProtocolConfig c;
  c.language = language;
  c.split_seed = split_seed;
  c.boundary = boundary;
  c.ner = ner;
  c.deslex = deslex;
  c.pipeline = pipeline;
  c.baselines = baselines;
  c.k_max = k_max;
  c.incremental_epochs = incremental_epochs;
  return c;
}

}  // namespace miner
