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

// Generative-model extraction baseline: prompt an external model for all
// metadata categories as JSON, repair and parse the answer, align the values
// back to document spans and score them.

#ifndef MINER_LLM_BASELINE_H_
#define MINER_LLM_BASELINE_H_

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "miner/corpus.h"
#include "miner/meter.h"
#include "miner/metrics.h"
#include "miner/pipeline.h"

namespace miner {

struct EndpointConfig {
  std::string kind = "mock";  // "mock" or "http"
  std::string model = "mock";
  std::string url;            // OpenAI-compatible base URL, e.g. https://host/v1
  std::string api_key_env = "LLM_API_KEY";
  std::filesystem::path mock_dir;
  double temperature = 0.0;
  int max_tokens = 2048;
  double timeout_s = 120.0;
  int retries = 3;
  int concurrency = 1;

  nlohmann::ordered_json to_json() const;
  static EndpointConfig from_json(const nlohmann::json& j);
};

class Endpoint {
 public:
  virtual ~Endpoint() = default;
  // `request_key` identifies the request (the document id); the mock uses it
  // to find its canned answer. Throws EndpointError.
  virtual std::string complete(const std::string& prompt, const std::string& request_key) = 0;
};

// Canned responses read from `<dir>/<request_key>.txt`, or from memory.
class MockEndpoint : public Endpoint {
 public:
  explicit MockEndpoint(std::filesystem::path dir) : dir_(std::move(dir)) {}
  explicit MockEndpoint(std::map<std::string, std::string> responses)
      : responses_(std::move(responses)) {}
  std::string complete(const std::string& prompt, const std::string& request_key) override;
  int calls() const { return calls_; }

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::string> responses_;
  std::atomic<int> calls_{0};
};

// Chat-completions client with retries and exponential backoff.
class HttpEndpoint : public Endpoint {
 public:
  explicit HttpEndpoint(EndpointConfig config);
  std::string complete(const std::string& prompt, const std::string& request_key) override;

 private:
  EndpointConfig config_;
};

std::unique_ptr<Endpoint> make_endpoint(const EndpointConfig& config);

struct FewShotExample {
  std::string text;
  nlohmann::ordered_json answer;
};

struct ExtractionPromptSpec {
  Language language = Language::kPt;
  std::string instruction;
  std::vector<FewShotExample> examples;
  EndpointConfig endpoint;

  // Default instruction with category definitions; few-shot examples are the
  // gold regions of `shots` (which must come from the training split).
  static ExtractionPromptSpec make_default(Language lang,
                                           const std::vector<const AnnotatedMinute*>& shots,
                                           EndpointConfig endpoint);
  std::string render(const MinuteDocument& doc) const;
  nlohmann::ordered_json to_json() const;
  // SHA-256 prefix over everything that affects the response.
  std::string hash() const;
};

// The JSON answer a perfect model would give for these entities.
nlohmann::ordered_json answer_json(const std::vector<EntityAnnotation>& entities);

// Schema keys, one per category.
const std::vector<std::string>& answer_keys();

struct ParseOutcome {
  bool ok = false;
  std::string stage;  // "direct", "fence", "balanced", "tolerant" or "failed"
  nlohmann::json value;
  std::string error;
};

std::string strip_code_fences(std::string_view text);
// First balanced {...} block, quotes respected; empty when none.
std::string first_balanced_object(std::string_view text);
// Single quotes to double quotes, trailing commas dropped, Python literals
// mapped to JSON.
std::string tolerant_json(std::string_view text);
ParseOutcome parse_llm_json(std::string_view raw);

enum class MatchLevel { kExact, kFolded, kEditDistance };
std::string_view match_level_name(MatchLevel level);

struct Alignment {
  Span span;
  MatchLevel level = MatchLevel::kExact;
};

size_t edit_distance(std::string_view a, std::string_view b);

// Exact match, then case/diacritic-insensitive, then the closest substring
// within floor(max_edit_ratio * length) edits. Occurrences on word
// boundaries are preferred, earliest first.
std::optional<Alignment> align_value(std::string_view text, std::string_view value,
                                     double max_edit_ratio = 0.2);

struct AlignedValue {
  Category category;
  std::string value;
  std::optional<Alignment> alignment;
};

struct LlmResult {
  std::string doc_id;
  std::string raw;
  ParseOutcome parse;
  std::vector<AlignedValue> values;
  std::vector<EntityAnnotation> entities;  // aligned values only
  int unaligned = 0;
  MetadataRecord record;
  ResourceReport resource;
  bool from_cache = false;
};

// Values extracted from a parsed answer, in schema order.
std::vector<AlignedValue> values_from_answer(const nlohmann::json& answer);

// Queries the endpoint (or replays `cache_dir/<spec-hash>/<doc_id>.json`),
// parses, aligns and meters. Parse failures yield an empty record; endpoint
// failures throw EndpointError.
LlmResult llm_extract(const MinuteDocument& doc, const ExtractionPromptSpec& spec,
                      Endpoint& endpoint, ResourceMeter* meter,
                      const std::optional<std::filesystem::path>& cache_dir = std::nullopt);

struct LlmBenchmark {
  EntityScores llm;
  ErrorCounts llm_errors;
  int parse_failures = 0;
  int unaligned = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // doc_id, message
  std::vector<std::pair<std::string, ResourceReport>> llm_per_document;
  ResourceReport llm_total;
  std::optional<EntityScores> pipeline;
  std::optional<ResourceReport> pipeline_total;
  size_t documents = 0;

  nlohmann::ordered_json to_json() const;
};

// Scores the model on `test` (unaligned values count as false positives),
// side by side with pipeline records for the same documents when given.
LlmBenchmark llm_benchmark(const std::vector<AnnotatedMinute>& test,
                           const ExtractionPromptSpec& spec, Endpoint& endpoint,
                           ResourceMeter* meter,
                           const std::optional<std::filesystem::path>& cache_dir = std::nullopt,
                           const BatchResult* pipeline = nullptr);

}  // namespace miner

#endif  // MINER_LLM_BASELINE_H_
