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

#include "miner/llm_baseline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <regex>
#include <thread>

#include <fmt/core.h>

#include "httplib.h"
#include "miner/boundary.h"
#include "miner/errors.h"
#include "miner/hash.h"

namespace miner {

using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Endpoints

ordered_json EndpointConfig::to_json() const {
  ordered_json j;
  j["kind"] = kind;
  j["model"] = model;
  j["url"] = url;
  j["api_key_env"] = api_key_env;
  j["mock_dir"] = mock_dir.string();
  j["temperature"] = temperature;
  j["max_tokens"] = max_tokens;
  j["timeout_s"] = timeout_s;
  j["retries"] = retries;
  j["concurrency"] = concurrency;
  return j;
}

EndpointConfig EndpointConfig::from_json(const json& j) {
  EndpointConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "kind") {
      c.kind = v.get<std::string>();
    } else if (key == "model") {
      c.model = v.get<std::string>();
    } else if (key == "url") {
      c.url = v.get<std::string>();
    } else if (key == "api_key_env") {
      c.api_key_env = v.get<std::string>();
    } else if (key == "mock_dir") {
      c.mock_dir = v.get<std::string>();
    } else if (key == "temperature") {
      c.temperature = v.get<double>();
    } else if (key == "max_tokens") {
      c.max_tokens = v.get<int>();
    } else if (key == "timeout_s") {
      c.timeout_s = v.get<double>();
    } else if (key == "retries") {
      c.retries = v.get<int>();
    } else if (key == "concurrency") {
      c.concurrency = v.get<int>();
    } else {
      throw ConfigError("llm: unknown key '" + key + "'");
    }
  }
  if (c.kind != "mock" && c.kind != "http") throw ConfigError("llm: kind must be mock or http");
  if (c.kind == "http" && c.url.empty()) throw ConfigError("llm: http endpoint needs a url");
  if (c.max_tokens <= 0 || c.timeout_s <= 0 || c.retries < 0 || c.concurrency <= 0) {
    throw ConfigError("llm: max_tokens, timeout_s and concurrency must be positive");
  }
  return c;
}

std::string MockEndpoint::complete(const std::string&, const std::string& request_key) {
  ++calls_;
  if (dir_.empty()) {
    auto it = responses_.find(request_key);
    if (it == responses_.end()) throw EndpointError("mock has no response for '" + request_key + "'");
    return it->second;
  }
  std::ifstream in(dir_ / (request_key + ".txt"), std::ios::binary);
  if (!in) throw EndpointError("mock has no response file for '" + request_key + "'");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

HttpEndpoint::HttpEndpoint(EndpointConfig config) : config_(std::move(config)) {}

std::string HttpEndpoint::complete(const std::string& prompt, const std::string& request_key) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.url, m, kUrl)) {
    throw EndpointError("malformed endpoint url '" + config_.url + "'");
  }
  std::string base = m[1].str();
  std::string path = m[2].matched ? m[2].str() : "";
  while (!path.empty() && path.back() == '/') path.pop_back();
  path += "/chat/completions";

  json body{{"model", config_.model},
            {"temperature", config_.temperature},
            {"max_tokens", config_.max_tokens},
            {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}};
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  std::string last_error;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(500 << std::min(attempt - 1, 6)));
    }
    httplib::Client client(base);
    auto timeout = std::chrono::duration<double>(config_.timeout_s);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = fmt::format("HTTP {}", res->status);
      continue;
    }
    if (res->status != 200) {
      throw EndpointError(fmt::format("request '{}' failed with HTTP {}: {}", request_key,
                                      res->status, res->body.substr(0, 200)));
    }
    try {
      json reply = json::parse(res->body);
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw EndpointError(std::string("unexpected endpoint reply: ") + e.what());
    }
  }
  throw EndpointError(fmt::format("request '{}' failed after {} attempts: {}", request_key,
                                  config_.retries + 1, last_error));
}

std::unique_ptr<Endpoint> make_endpoint(const EndpointConfig& config) {
  if (config.kind == "http") return std::make_unique<HttpEndpoint>(config);
  if (config.mock_dir.empty()) throw ConfigError("llm: mock endpoint needs mock_dir");
  return std::make_unique<MockEndpoint>(config.mock_dir);
}

// ---------------------------------------------------------------------------
// Prompt

const std::vector<std::string>& answer_keys() {
  static const std::vector<std::string> kKeys = {
      "meeting_number", "meeting_type", "date",      "location",
      "start_time",     "end_time",     "president", "councilors"};
  return kKeys;
}

namespace {

Kind key_kind(std::string_view key) {
  static const std::map<std::string_view, Kind> kMap = {
      {"meeting_number", Kind::kMeetingNumber}, {"meeting_type", Kind::kMeetingType},
      {"date", Kind::kDate},                    {"location", Kind::kLocation},
      {"start_time", Kind::kStartTime},         {"end_time", Kind::kEndTime},
      {"president", Kind::kPresident},          {"councilors", Kind::kCouncilor}};
  return kMap.at(key);
}

std::string_view kind_key(Kind kind) {
  for (const auto& key : answer_keys()) {
    if (key_kind(key) == kind) return key;
  }
  return "";
}

Presence parse_presence_loose(const json& v) {
  if (!v.is_string()) return Presence::kPresent;
  std::string p = fold_diacritics(v.get<std::string>(), nullptr);
  if (p.find("absen") != std::string::npos || p.find("ausen") != std::string::npos ||
      p.find("falt") != std::string::npos) {
    return Presence::kAbsent;
  }
  if (p.find("substitu") != std::string::npos || p.find("replac") != std::string::npos) {
    return Presence::kSubstituted;
  }
  return Presence::kPresent;
}

}  // namespace

ordered_json answer_json(const std::vector<EntityAnnotation>& entities) {
  ordered_json j;
  for (const auto& key : answer_keys()) j[key] = nullptr;
  j["councilors"] = ordered_json::array();
  for (const auto& e : entities) {
    std::string key(kind_key(e.category.kind));
    if (e.category.kind == Kind::kCouncilor) {
      j[key].push_back({{"name", e.surface}, {"presence", presence_name(e.category.presence)}});
    } else if (e.category.kind == Kind::kPresident) {
      if (j[key].is_null()) {
        j[key] = {{"name", e.surface}, {"presence", presence_name(e.category.presence)}};
      }
    } else if (j[key].is_null()) {
      j[key] = e.surface;
    }
  }
  return j;
}

ExtractionPromptSpec ExtractionPromptSpec::make_default(
    Language lang, const std::vector<const AnnotatedMinute*>& shots, EndpointConfig endpoint) {
  ExtractionPromptSpec spec;
  spec.language = lang;
  spec.endpoint = std::move(endpoint);
  spec.instruction =
      "Extract the metadata of the municipal meeting minute below. Answer with one JSON "
      "object and nothing else, using exactly these keys:\n"
      "- meeting_number: the number of the minute or meeting, as written\n"
      "- meeting_type: the type of meeting (e.g. ordinary, extraordinary), as written\n"
      "- date: the date of the meeting, as written\n"
      "- location: where the meeting took place, as written\n"
      "- start_time: when the meeting started, as written\n"
      "- end_time: when the meeting ended, as written\n"
      "- president: {\"name\": ..., \"presence\": \"present\"|\"absent\"|\"substituted\"} "
      "for the person presiding\n"
      "- councilors: a list of {\"name\": ..., \"presence\": "
      "\"present\"|\"absent\"|\"substituted\"}\n"
      "Copy every value verbatim from the text. Use null (or an empty list) for anything "
      "the minute does not state.";
  if (lang == Language::kPt) {
    spec.instruction += " The minute is written in Portuguese; keep the values in Portuguese.";
  }
  for (const auto* m : shots) {
    ReducedRegion region = gold_region(*m);
    if (region.empty_flag) continue;
    spec.examples.push_back({region.text, answer_json(annotations_in_region(*m, region))});
  }
  return spec;
}

std::string ExtractionPromptSpec::render(const MinuteDocument& doc) const {
  std::string out = instruction;
  out += "\n\n";
  for (size_t i = 0; i < examples.size(); ++i) {
    out += fmt::format("Example {}:\nText:\n{}\nJSON:\n{}\n\n", i + 1, examples[i].text,
                       examples[i].answer.dump());
  }
  out += "Text:\n";
  out += doc.text;
  out += "\nJSON:\n";
  return out;
}

ordered_json ExtractionPromptSpec::to_json() const {
  ordered_json j;
  j["language"] = language_code(language);
  j["instruction"] = instruction;
  j["examples"] = ordered_json::array();
  for (const auto& e : examples) j["examples"].push_back({{"text", e.text}, {"answer", e.answer}});
  j["model"] = endpoint.model;
  j["kind"] = endpoint.kind;
  j["temperature"] = endpoint.temperature;
  j["max_tokens"] = endpoint.max_tokens;
  return j;
}

std::string ExtractionPromptSpec::hash() const { return sha256_hex(to_json().dump()).substr(0, 16); }

// ---------------------------------------------------------------------------
// Repair ladder

std::string strip_code_fences(std::string_view text) {
  size_t open = text.find("```");
  if (open == std::string_view::npos) return std::string(text);
  size_t body = text.find('\n', open);
  size_t close = text.find("```", open + 3);
  // Inline fences ("```json {...} ```") have no newline before the content.
  if (body == std::string_view::npos || (close != std::string_view::npos && close < body)) {
    body = open + 3;
    while (body < text.size() && std::isalpha(static_cast<unsigned char>(text[body]))) ++body;
  } else {
    ++body;
  }
  close = text.find("```", body);
  if (close == std::string_view::npos) close = text.size();
  return std::string(text.substr(body, close - body));
}

std::string first_balanced_object(std::string_view text) {
  size_t start = text.find('{');
  while (start != std::string_view::npos) {
    int depth = 0;
    char quote = 0;
    for (size_t i = start; i < text.size(); ++i) {
      char c = text[i];
      if (quote) {
        if (c == '\\') {
          ++i;
        } else if (c == quote) {
          quote = 0;
        }
        continue;
      }
      if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        if (--depth == 0) return std::string(text.substr(start, i - start + 1));
      }
    }
    start = text.find('{', start + 1);
  }
  return "";
}

std::string tolerant_json(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '"' || c == '\'') {
      // Copy a string literal, re-quoting single-quoted ones.
      char quote = c;
      out.push_back('"');
      for (++i; i < text.size() && text[i] != quote; ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) {
          if (quote == '\'' && text[i + 1] == '\'') {
            out.push_back('\'');
          } else {
            out.push_back('\\');
            out.push_back(text[i + 1]);
          }
          ++i;
        } else if (text[i] == '"' && quote == '\'') {
          out += "\\\"";
        } else {
          out.push_back(text[i]);
        }
      }
      out.push_back('"');
      continue;
    }
    if (c == ',') {
      size_t j = i + 1;
      while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && (text[j] == '}' || text[j] == ']')) continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
      std::string_view word = text.substr(i, j - i);
      if (word == "None") {
        out += "null";
      } else if (word == "True") {
        out += "true";
      } else if (word == "False") {
        out += "false";
      } else {
        out += word;
      }
      i = j - 1;
      continue;
    }
    out.push_back(c);
  }
  return out;
}

namespace {

std::optional<json> try_parse(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded() || !v.is_object()) return std::nullopt;
  return v;
}

}  // namespace

ParseOutcome parse_llm_json(std::string_view raw) {
  ParseOutcome out;
  std::string text(raw);
  std::string stage = "direct";
  if (text.find("```") != std::string::npos) {
    text = strip_code_fences(text);
    stage = "fence";
  }
  if (auto v = try_parse(text)) {
    out.ok = true;
    out.stage = stage;
    out.value = std::move(*v);
    return out;
  }
  std::string block = first_balanced_object(text);
  if (!block.empty()) {
    if (auto v = try_parse(block)) {
      out.ok = true;
      out.stage = "balanced";
      out.value = std::move(*v);
      return out;
    }
  }
  if (auto v = try_parse(tolerant_json(block.empty() ? text : block))) {
    out.ok = true;
    out.stage = "tolerant";
    out.value = std::move(*v);
    return out;
  }
  out.stage = "failed";
  out.error = "no JSON object could be recovered from the response";
  return out;
}

// ---------------------------------------------------------------------------
// Alignment

std::string_view match_level_name(MatchLevel level) {
  switch (level) {
    case MatchLevel::kExact:
      return "exact";
    case MatchLevel::kFolded:
      return "folded";
    default:
      return "edit_distance";
  }
}

size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

bool at_word_boundaries(std::string_view text, size_t begin, size_t end) {
  auto word_before = [&](size_t pos) {
    if (pos == 0) return false;
    size_t start = pos - 1;
    while (start > 0 && (static_cast<unsigned char>(text[start]) & 0xC0) == 0x80) --start;
    size_t len = 1;
    return is_word_codepoint(decode_utf8(text, start, &len));
  };
  auto word_at = [&](size_t pos) {
    if (pos >= text.size()) return false;
    size_t len = 1;
    return is_word_codepoint(decode_utf8(text, pos, &len));
  };
  bool left_ok = !(word_before(begin) && word_at(begin));
  bool right_ok = !(word_before(end) && word_at(end));
  return left_ok && right_ok;
}

// Earliest occurrence on word boundaries, else the earliest occurrence.
std::optional<size_t> find_occurrence(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return std::nullopt;
  std::optional<size_t> first;
  for (size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + 1)) {
    if (!first) first = pos;
    if (at_word_boundaries(haystack, pos, pos + needle.size())) return pos;
  }
  return first;
}

}  // namespace

std::optional<Alignment> align_value(std::string_view text, std::string_view value,
                                     double max_edit_ratio) {
  std::string v = trim(value);
  if (v.empty()) return std::nullopt;
  if (auto pos = find_occurrence(text, v)) {
    return Alignment{{*pos, *pos + v.size()}, MatchLevel::kExact};
  }
  std::vector<size_t> offsets;
  std::string folded_text = fold_diacritics(text, &offsets);
  std::string folded_value = fold_diacritics(v, nullptr);
  if (auto pos = find_occurrence(folded_text, folded_value)) {
    Span span{offsets[*pos], offsets[*pos + folded_value.size()]};
    if (fold_diacritics(slice(text, span), nullptr) == folded_value) {
      return Alignment{span, MatchLevel::kFolded};
    }
  }

  const size_t m = folded_value.size();
  const size_t k = static_cast<size_t>(std::floor(max_edit_ratio * m));
  if (k == 0 || folded_text.empty()) return std::nullopt;
  // Approximate substring search: D[i] = edits aligning value[0:i] to a
  // substring ending at the current text position; start[i] tracks where it
  // began.
  std::vector<size_t> d(m + 1), nd(m + 1), st(m + 1), nst(m + 1);
  for (size_t i = 0; i <= m; ++i) {
    d[i] = i;
    st[i] = 0;
  }
  size_t best = k + 1, best_begin = 0, best_end = 0;
  for (size_t j = 1; j <= folded_text.size(); ++j) {
    nd[0] = 0;
    nst[0] = j;
    for (size_t i = 1; i <= m; ++i) {
      size_t sub = d[i - 1] + (folded_value[i - 1] != folded_text[j - 1]);
      size_t del = d[i] + 1;
      size_t ins = nd[i - 1] + 1;
      if (sub <= del && sub <= ins) {
        nd[i] = sub;
        nst[i] = st[i - 1];
      } else if (del <= ins) {
        nd[i] = del;
        nst[i] = st[i];
      } else {
        nd[i] = ins;
        nst[i] = nst[i - 1];
      }
    }
    std::swap(d, nd);
    std::swap(st, nst);
    if (d[m] < best) {
      best = d[m];
      best_begin = st[m];
      best_end = j;
    }
  }
  if (best > k) return std::nullopt;
  Span raw{offsets[best_begin], offsets[best_end]};
  auto within = [&](const Span& s) {
    return !s.empty() && edit_distance(fold_diacritics(slice(text, s), nullptr), folded_value) <= k;
  };
  // Prefer the span widened to whole words.
  Span snapped = raw;
  for (const Span& t : tokenize_words(text)) {
    if (t.overlaps(raw)) {
      snapped.begin = std::min(snapped.begin, t.begin);
      snapped.end = std::max(snapped.end, t.end);
    }
  }
  if (within(snapped)) return Alignment{snapped, MatchLevel::kEditDistance};
  if (within(raw)) return Alignment{raw, MatchLevel::kEditDistance};
  return std::nullopt;
}

std::vector<AlignedValue> values_from_answer(const json& answer) {
  std::vector<AlignedValue> out;
  if (!answer.is_object()) return out;
  auto add_participant = [&](Kind kind, const json& v) {
    if (v.is_string()) {
      out.push_back({make_category(kind, Presence::kPresent), v.get<std::string>(), std::nullopt});
    } else if (v.is_object()) {
      const json& name = v.contains("name") ? v["name"] : json();
      if (!name.is_string()) return;
      Presence p = parse_presence_loose(v.contains("presence") ? v["presence"] : json());
      out.push_back({make_category(kind, p), name.get<std::string>(), std::nullopt});
    }
  };
  for (const auto& key : answer_keys()) {
    if (!answer.contains(key)) continue;
    const json& v = answer[key];
    Kind kind = key_kind(key);
    if (is_participant(kind)) {
      if (v.is_array()) {
        for (const auto& item : v) add_participant(kind, item);
      } else {
        add_participant(kind, v);
      }
      continue;
    }
    auto add = [&](const json& s) {
      if (s.is_string() && !trim(s.get<std::string>()).empty()) {
        out.push_back({make_category(kind), s.get<std::string>(), std::nullopt});
      } else if (s.is_number()) {
        out.push_back({make_category(kind), s.dump(), std::nullopt});
      }
    };
    if (v.is_array()) {
      for (const auto& item : v) add(item);
    } else {
      add(v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Extraction and benchmark

namespace {

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += fmt::format(".tmp{}", std::hash<std::thread::id>()(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

LlmResult llm_extract(const MinuteDocument& doc, const ExtractionPromptSpec& spec,
                      Endpoint& endpoint, ResourceMeter* meter,
                      const std::optional<std::filesystem::path>& cache_dir) {
  LlmResult result;
  result.doc_id = doc.doc_id;
  std::filesystem::path cache_file;
  if (cache_dir) cache_file = *cache_dir / spec.hash() / (doc.doc_id + ".json");

  bool cached = false;
  if (cache_dir && std::filesystem::exists(cache_file)) {
    std::ifstream in(cache_file);
    json entry = json::parse(in, nullptr, false);
    if (!entry.is_discarded() && entry.contains("raw")) {
      result.raw = entry["raw"].get<std::string>();
      if (entry.contains("resource")) {
        const json& r = entry["resource"];
        result.resource.wall_seconds = r.value("wall_seconds", 0.0);
        result.resource.energy_kwh = r.value("energy_kWh", 0.0);
        result.resource.kg_co2e = r.value("kg_CO2e", 0.0);
        result.resource.measured_power = r.value("power_source", "") == "counters";
      }
      result.from_cache = cached = true;
    }
  }
  if (!cached) {
    const std::string prompt = spec.render(doc);
    std::exception_ptr failure;
    auto call = [&] {
      try {
        result.raw = endpoint.complete(prompt, doc.doc_id);
      } catch (...) {
        failure = std::current_exception();
      }
    };
    if (meter) {
      result.resource = meter->measure(call);
    } else {
      double start = steady_seconds();
      call();
      result.resource.wall_seconds = steady_seconds() - start;
    }
    if (failure) std::rethrow_exception(failure);
  }

  result.parse = parse_llm_json(result.raw);
  if (cache_dir && !cached) {
    ordered_json entry;
    entry["doc_id"] = doc.doc_id;
    entry["raw"] = result.raw;
    entry["parse_status"] = result.parse.ok ? "ok" : "failed";
    entry["parse_stage"] = result.parse.stage;
    entry["resource"] = result.resource.to_json(true);
    write_atomic(cache_file, entry.dump(2));
  }
  if (!result.parse.ok) {
    log_warning(fmt::format("doc '{}': unparseable model output ({})", doc.doc_id,
                            result.parse.error));
    result.record.doc_id = doc.doc_id;
    return result;
  }

  result.values = values_from_answer(result.parse.value);
  std::vector<Entity> entities;
  for (auto& v : result.values) {
    v.alignment = align_value(doc.text, v.value);
    if (!v.alignment) {
      ++result.unaligned;
      continue;
    }
    Entity e;
    e.category = v.category;
    e.span = v.alignment->span;
    e.surface = std::string(slice(doc.text, e.span));
    e.confidence = 1.0;
    result.entities.push_back({e.category, e.span, e.surface});
    entities.push_back(std::move(e));
  }
  result.record = assemble_record(doc.doc_id, std::move(entities));
  return result;
}

ordered_json LlmBenchmark::to_json() const {
  ordered_json j;
  j["documents"] = documents;
  ordered_json llm_j = llm.to_json();
  llm_j["errors"] = llm_errors.to_json();
  llm_j["parse_failures"] = parse_failures;
  llm_j["unaligned_values"] = unaligned;
  llm_j["endpoint_failures"] = ordered_json::array();
  for (const auto& [doc, msg] : failures) llm_j["endpoint_failures"].push_back({{"doc_id", doc}, {"error", msg}});
  llm_j["resource"] = llm_total.to_json();
  llm_j["per_document_seconds"] = ordered_json::object();
  for (const auto& [doc, r] : llm_per_document) llm_j["per_document_seconds"][doc] = r.wall_seconds;
  j["llm"] = llm_j;
  if (pipeline) {
    ordered_json p = pipeline->to_json();
    if (pipeline_total) p["resource"] = pipeline_total->to_json();
    j["pipeline"] = p;
    if (pipeline_total && documents > 0) {
      ordered_json ratios;
      double llm_latency = llm_total.wall_seconds / documents;
      double pipe_latency = pipeline_total->wall_seconds / documents;
      ratios["llm_seconds_per_document"] = llm_latency;
      ratios["pipeline_seconds_per_document"] = pipe_latency;
      if (pipe_latency > 0) ratios["latency_ratio"] = llm_latency / pipe_latency;
      if (pipeline_total->energy_kwh > 0) {
        ratios["energy_ratio"] = llm_total.energy_kwh / pipeline_total->energy_kwh;
      }
      if (pipeline_total->kg_co2e > 0) {
        ratios["co2_ratio"] = llm_total.kg_co2e / pipeline_total->kg_co2e;
      }
      j["ratios"] = ratios;
    }
  }
  return j;
}

LlmBenchmark llm_benchmark(const std::vector<AnnotatedMinute>& test,
                           const ExtractionPromptSpec& spec, Endpoint& endpoint,
                           ResourceMeter* meter,
                           const std::optional<std::filesystem::path>& cache_dir,
                           const BatchResult* pipeline) {
  LlmBenchmark bench;
  bench.documents = test.size();
  std::vector<std::optional<LlmResult>> results(test.size());
  std::vector<std::string> errors(test.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < test.size(); i = next++) {
      try {
        results[i] = llm_extract(test[i].doc, spec, endpoint, meter, cache_dir);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(spec.endpoint.concurrency, test.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<ScoredDocument> docs;
  for (size_t i = 0; i < test.size(); ++i) {
    const auto& m = test[i];
    ScoredDocument d{m.doc.doc_id, m.doc.text.size(), {}, m.entities};
    if (!results[i]) {
      bench.failures.emplace_back(m.doc.doc_id, errors[i]);
    } else {
      const LlmResult& r = *results[i];
      d.pred = r.entities;
      if (!r.parse.ok) ++bench.parse_failures;
      bench.unaligned += r.unaligned;
      bench.llm_per_document.emplace_back(m.doc.doc_id, r.resource);
      bench.llm_total += r.resource;
      for (const auto& v : r.values) {
        if (!v.alignment) ++bench.llm.per_category[v.category.label()].fp;
      }
    }
    bench.llm_errors += error_taxonomy(d.pred, d.gold);
    docs.push_back(std::move(d));
  }
  EntityScores scored = entity_prf(docs);
  for (auto& [label, counts] : scored.per_category) bench.llm.per_category[label] += counts;
  bench.llm.micro = scored.micro;
  bench.llm.micro.fp += bench.unaligned;
  bench.llm_errors.spurious += bench.unaligned;

  if (pipeline) {
    std::map<std::string, const MetadataRecord*> by_id;
    for (const auto& r : pipeline->records) by_id[r.doc_id] = &r;
    std::vector<ScoredDocument> pdocs;
    for (const auto& m : test) {
      auto it = by_id.find(m.doc.doc_id);
      pdocs.push_back({m.doc.doc_id, m.doc.text.size(),
                       it == by_id.end() ? std::vector<EntityAnnotation>{} : it->second->entities,
                       m.entities});
    }
    bench.pipeline = entity_prf(pdocs);
    bench.pipeline_total = pipeline->total;
  }
  return bench;
}

}  // namespace miner
