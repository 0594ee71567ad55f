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

#include "miner/boundary.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/core.h>

#include "miner/errors.h"
#include "miner/hash.h"
#include "miner/metrics.h"

namespace miner {

using nlohmann::json;
using nlohmann::ordered_json;

BoundaryPrompt default_prompt(SegmentType type, Language lang) {
  if (lang == Language::kPt) {
    return {type, type == SegmentType::kOpening
                      ? "Qual é o segmento de abertura da ata, com os dados da reunião?"
                      : "Qual é o segmento de encerramento da ata?"};
  }
  return {type, type == SegmentType::kOpening
                    ? "What is the opening segment of the minutes, with the meeting details?"
                    : "What is the closing segment of the minutes?"};
}

// ---------------------------------------------------------------------------

std::vector<TokenWindow> chunk_with_stride(size_t num_tokens, size_t max_length,
                                           size_t stride) {
  if (max_length == 0 || stride >= max_length) {
    throw ConfigError(fmt::format("stride {} must be below max_length {}", stride, max_length));
  }
  std::vector<TokenWindow> windows;
  if (num_tokens == 0) return windows;
  const size_t step = max_length - stride;
  for (size_t begin = 0;; begin += step) {
    size_t end = std::min(begin + max_length, num_tokens);
    windows.push_back({begin, end});
    if (end == num_tokens) break;
  }
  return windows;
}

// ---------------------------------------------------------------------------

std::optional<size_t> ReducedRegion::to_source(size_t region_offset) const {
  for (const auto& p : offset_map) {
    if (region_offset >= p.region.begin && region_offset <= p.region.end) {
      return p.source.begin + (region_offset - p.region.begin);
    }
  }
  return std::nullopt;
}

std::optional<size_t> ReducedRegion::to_region(size_t source_offset) const {
  for (const auto& p : offset_map) {
    if (source_offset >= p.source.begin && source_offset <= p.source.end) {
      return p.region.begin + (source_offset - p.source.begin);
    }
  }
  return std::nullopt;
}

std::optional<Span> ReducedRegion::span_to_source(const Span& s) const {
  for (const auto& p : offset_map) {
    if (p.region.contains(s) ) {
      return Span{p.source.begin + (s.begin - p.region.begin),
                  p.source.begin + (s.end - p.region.begin)};
    }
  }
  return std::nullopt;
}

std::optional<Span> ReducedRegion::span_to_region(const Span& s) const {
  for (const auto& p : offset_map) {
    if (p.source.contains(s)) {
      return Span{p.region.begin + (s.begin - p.source.begin),
                  p.region.begin + (s.end - p.source.begin)};
    }
  }
  return std::nullopt;
}

ReducedRegion make_region(const MinuteDocument& doc, std::optional<Span> opening,
                          std::optional<Span> closing, bool strict) {
  if (opening && closing && opening->overlaps(*closing)) {
    if (strict) {
      throw OverlapError(fmt::format("doc '{}': predicted opening and closing overlap",
                                     doc.doc_id));
    }
    closing->begin = std::max(closing->begin, opening->end);
    if (closing->empty()) closing.reset();
  }
  ReducedRegion region;
  region.source_doc_id = doc.doc_id;
  for (const auto& seg : {opening, closing}) {
    if (!seg || seg->empty()) continue;
    if (seg->end > doc.text.size()) throw SpanError("segment outside document");
    if (!region.text.empty()) region.text += ReducedRegion::kSeparator;
    Span r{region.text.size(), region.text.size() + seg->size()};
    region.text += slice(doc.text, *seg);
    region.offset_map.push_back({r, *seg});
  }
  region.empty_flag = region.offset_map.empty();
  return region;
}

ReducedRegion extract_region(const MinuteDocument& doc, const SpanPrediction& opening,
                             const SpanPrediction& closing, bool strict) {
  return make_region(doc, opening.span, closing.span, strict);
}

ReducedRegion gold_region(const AnnotatedMinute& minute) {
  return make_region(minute.doc, minute.segment(SegmentType::kOpening),
                     minute.segment(SegmentType::kClosing));
}

ReducedRegion full_document_region(const MinuteDocument& doc) {
  ReducedRegion region;
  region.source_doc_id = doc.doc_id;
  region.text = doc.text;
  if (!doc.text.empty()) region.offset_map.push_back({{0, doc.text.size()}, {0, doc.text.size()}});
  region.empty_flag = doc.text.empty();
  return region;
}

std::vector<EntityAnnotation> annotations_in_region(const AnnotatedMinute& minute,
                                                    const ReducedRegion& region) {
  std::vector<EntityAnnotation> out;
  for (const auto& e : minute.entities) {
    if (auto r = region.span_to_region(e.span)) {
      out.push_back({e.category, *r, e.surface});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Features

ordered_json BoundaryHyperparams::to_json() const {
  ordered_json j;
  j["epochs"] = epochs;
  j["learning_rate"] = learning_rate;
  j["batch_size"] = batch_size;
  j["weight_decay"] = weight_decay;
  j["max_length"] = max_length;
  j["stride"] = stride;
  j["max_answer_tokens"] = max_answer_tokens;
  j["seed"] = seed;
  return j;
}

BoundaryHyperparams BoundaryHyperparams::from_json(const json& j) {
  BoundaryHyperparams hp;
  hp.epochs = j.value("epochs", hp.epochs);
  hp.learning_rate = j.value("learning_rate", hp.learning_rate);
  hp.batch_size = j.value("batch_size", hp.batch_size);
  hp.weight_decay = j.value("weight_decay", hp.weight_decay);
  hp.max_length = j.value("max_length", hp.max_length);
  hp.stride = j.value("stride", hp.stride);
  hp.max_answer_tokens = j.value("max_answer_tokens", hp.max_answer_tokens);
  hp.seed = j.value("seed", hp.seed);
  if (hp.epochs <= 0 || hp.batch_size <= 0 || hp.learning_rate <= 0 || hp.max_length <= 0 ||
      hp.stride < 0 || hp.max_answer_tokens <= 0) {
    throw ConfigError("boundary hyperparameters must be positive");
  }
  return hp;
}

const BoundaryPrompt& BoundaryModelHandle::prompt(SegmentType type) const {
  auto it = prompts.find(type);
  if (it == prompts.end()) throw ConfigError("model has no prompt for this segment type");
  return it->second;
}

namespace {

std::string bucket(size_t n) {
  if (n < 4) return std::to_string(n);
  size_t b = 1;
  while (b * 2 <= n) b *= 2;
  return std::to_string(b);
}

bool is_alpha_word(std::string_view w) {
  if (w.size() < 4) return false;
  size_t len = 1;
  char32_t cp = decode_utf8(w, 0, &len);
  return is_word_codepoint(cp) && !(cp >= '0' && cp <= '9');
}

struct EncodedContext {
  std::vector<Span> tokens;
  std::vector<std::vector<uint64_t>> keys;
};

EncodedContext encode_context(const std::string& text, Language lang) {
  EncodedContext enc;
  enc.tokens = tokenize_words(text);
  const size_t n = enc.tokens.size();
  std::vector<Span> sentences = sentence_split(text, lang);
  std::vector<std::string> lower(n);
  for (size_t t = 0; t < n; ++t) lower[t] = to_lower(slice(text, enc.tokens[t]));

  // Token range of every sentence.
  std::vector<std::pair<size_t, size_t>> sent_tokens(sentences.size(), {n, 0});
  std::vector<int> sent_of(n, -1);
  size_t s = 0;
  for (size_t t = 0; t < n; ++t) {
    while (s < sentences.size() && sentences[s].end <= enc.tokens[t].begin) ++s;
    if (s < sentences.size() && sentences[s].contains(enc.tokens[t].begin)) {
      sent_of[t] = static_cast<int>(s);
      sent_tokens[s].first = std::min(sent_tokens[s].first, t);
      sent_tokens[s].second = t + 1;
    }
  }
  auto sent_word = [&](int si, size_t k) -> std::string {
    if (si < 0 || si >= static_cast<int>(sentences.size())) return "<none>";
    auto [b, e] = sent_tokens[si];
    return b + k < e ? lower[b + k] : "<end>";
  };
  auto sent_bow = [&](int si, size_t cap, std::vector<std::string>* out) {
    out->clear();
    if (si < 0 || si >= static_cast<int>(sentences.size())) return;
    for (size_t t = sent_tokens[si].first; t < sent_tokens[si].second && out->size() < cap; ++t) {
      if (is_alpha_word(lower[t])) out->push_back(lower[t]);
    }
  };

  const int num_sent = static_cast<int>(sentences.size());
  enc.keys.resize(n);
  FeatureBag bag;
  std::vector<std::string> bow;
  for (size_t t = 0; t < n; ++t) {
    bag.clear();
    bag.add("w", lower[t]);
    bag.add("sh", word_shape(slice(text, enc.tokens[t])));
    bag.add("w-1", t > 0 ? lower[t - 1] : "<s>");
    bag.add("w+1", t + 1 < n ? lower[t + 1] : "</s>");
    bag.add("ps", bucket(t));
    bag.add("pe", bucket(n - 1 - t));
    int si = sent_of[t];
    bool first = si >= 0 && sent_tokens[si].first == t;
    bool last = si >= 0 && sent_tokens[si].second == t + 1;
    std::string decile = std::to_string(n ? (10 * t) / n : 0);
    if (first) {
      bag.add("F");
      bag.add("F|s0", sent_word(si, 0));
      bag.add("F|s1", sent_word(si, 1));
      bag.add("F|s01", sent_word(si, 0) + " " + sent_word(si, 1));
      bag.add("F|ps0", sent_word(si - 1, 0));
      bag.add("F|si", bucket(si));
      bag.add("F|sie", bucket(num_sent - 1 - si));
      bag.add("F|dec", decile);
      sent_bow(si, 30, &bow);
      for (const auto& w : bow) bag.add("F|sb", w);
      sent_bow(si - 1, 30, &bow);
      for (const auto& w : bow) bag.add("F|psb", w);
    }
    if (last) {
      bag.add("L");
      bag.add("L|s0", sent_word(si, 0));
      bag.add("L|ns0", sent_word(si + 1, 0));
      bag.add("L|ns1", sent_word(si + 1, 1));
      bag.add("L|ns01", sent_word(si + 1, 0) + " " + sent_word(si + 1, 1));
      bag.add("L|si", bucket(si));
      bag.add("L|sie", bucket(num_sent - 1 - si));
      bag.add("L|dec", decile);
      bag.add("L|last_sentence", si == num_sent - 1 ? "1" : "0");
      sent_bow(si, 30, &bow);
      for (const auto& w : bow) bag.add("L|sb", w);
      sent_bow(si + 1, 30, &bow);
      for (const auto& w : bow) bag.add("L|nsb", w);
    }
    if (!first && !last) bag.add("M");
    enc.keys[t] = bag.keys();
  }
  return enc;
}

std::vector<uint64_t> cls_keys(size_t window_index, size_t num_windows) {
  FeatureBag bag;
  bag.add("cls");
  const char* where = num_windows == 1       ? "only"
                      : window_index == 0    ? "first"
                      : window_index + 1 == num_windows ? "last"
                                                        : "mid";
  bag.add("cls_pos", where);
  return bag.keys();
}

std::vector<uint64_t> crossed(std::vector<uint64_t> keys, uint64_t prompt_key) {
  for (auto& k : keys) k = mix64(k ^ prompt_key);
  return keys;
}

size_t context_window(int max_length, const std::string& question) {
  size_t q = tokenize_words(question).size();
  long avail = static_cast<long>(max_length) - static_cast<long>(q) - 3;
  return static_cast<size_t>(std::max<long>(avail, 16));
}

// First/last token overlapping a character span.
std::optional<std::pair<size_t, size_t>> token_range(const std::vector<Span>& tokens,
                                                     const Span& span) {
  size_t first = tokens.size(), last = 0;
  for (size_t t = 0; t < tokens.size(); ++t) {
    if (tokens[t].overlaps(span)) {
      first = std::min(first, t);
      last = t;
    }
  }
  if (first == tokens.size()) return std::nullopt;
  return std::make_pair(first, last);
}

struct WindowExample {
  size_t doc = 0;
  TokenWindow window;
  size_t window_index = 0;
  size_t num_windows = 1;
  size_t start_target = 0;  // 0 = CLS, otherwise 1 + local index
  size_t end_target = 0;
};

struct PreparedDoc {
  std::vector<std::vector<uint32_t>> ids;  // per token
  std::vector<std::vector<uint32_t>> cls;  // per window
};

}  // namespace

SpanPrediction BoundaryModel::predict(const std::string& context, Language lang,
                                      const std::string& question, int max_length,
                                      int stride, int max_answer_tokens) const {
  SpanPrediction best;
  best.span_score = -std::numeric_limits<double>::infinity();
  best.null_score = std::numeric_limits<double>::infinity();
  EncodedContext enc = encode_context(context, lang);
  const uint64_t pk = fnv1a(question);
  size_t win = context_window(max_length, question);
  auto windows = chunk_with_stride(enc.tokens.size(), win,
                                   std::min<size_t>(stride, win - 1));
  if (windows.empty()) {
    best.span_score = 0.0;
    best.null_score = 0.0;
    return best;
  }
  std::vector<std::vector<uint32_t>> ids(enc.tokens.size());
  for (size_t t = 0; t < enc.tokens.size(); ++t) ids[t] = space_.lookup(crossed(enc.keys[t], pk));
  for (size_t w = 0; w < windows.size(); ++w) {
    const auto& window = windows[w];
    float cls[2] = {0, 0};
    layer_.accumulate(space_.lookup(crossed(cls_keys(w, windows.size()), pk)), cls);
    best.null_score = std::min(best.null_score, double(cls[0]) + cls[1]);
    size_t len = window.end - window.begin;
    std::vector<float> start(len), end(len);
    for (size_t i = 0; i < len; ++i) {
      float s[2] = {0, 0};
      layer_.accumulate(ids[window.begin + i], s);
      start[i] = s[0];
      end[i] = s[1];
    }
    for (size_t j = 0; j < len; ++j) {
      size_t lo = j + 1 > static_cast<size_t>(max_answer_tokens) ? j + 1 - max_answer_tokens : 0;
      for (size_t i = lo; i <= j; ++i) {
        double score = double(start[i]) + end[j];
        if (score > best.span_score) {
          best.span_score = score;
          best.span = Span{enc.tokens[window.begin + i].begin, enc.tokens[window.begin + j].end};
        }
      }
    }
  }
  return best;
}

void BoundaryModel::fit(const std::vector<BoundaryTrainingDoc>& train,
                        const BoundaryHyperparams& hp) {
  if (train.empty()) throw DataError("empty boundary training set");
  std::vector<PreparedDoc> prepared(train.size());
  std::vector<WindowExample> examples;
  for (size_t d = 0; d < train.size(); ++d) {
    const auto& qa = train[d].instance;
    EncodedContext enc = encode_context(qa.context, train[d].language);
    const uint64_t pk = fnv1a(qa.question);
    auto& p = prepared[d];
    p.ids.resize(enc.tokens.size());
    for (size_t t = 0; t < enc.tokens.size(); ++t) {
      p.ids[t] = space_.lookup(crossed(enc.keys[t], pk), true);
    }
    size_t win = context_window(hp.max_length, qa.question);
    auto windows = chunk_with_stride(enc.tokens.size(), win,
                                     std::min<size_t>(hp.stride, win - 1));
    std::optional<std::pair<size_t, size_t>> answer;
    if (!qa.is_impossible) answer = token_range(enc.tokens, qa.answer);
    for (size_t w = 0; w < windows.size(); ++w) {
      p.cls.push_back(space_.lookup(crossed(cls_keys(w, windows.size()), pk), true));
      WindowExample ex;
      ex.doc = d;
      ex.window = windows[w];
      ex.window_index = w;
      ex.num_windows = windows.size();
      if (answer && windows[w].contains(answer->first, answer->second) &&
          answer->second - answer->first < static_cast<size_t>(hp.max_answer_tokens)) {
        ex.start_target = 1 + answer->first - windows[w].begin;
        ex.end_target = 1 + answer->second - windows[w].begin;
      }
      examples.push_back(ex);
    }
  }
  layer_.resize(space_.size());

  OptimizerConfig opt{hp.learning_rate, hp.weight_decay};
  std::mt19937_64 rng(hp.seed);
  std::vector<size_t> order(examples.size());
  GradientBuffer grad(2);
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    int in_batch = 0;
    for (size_t idx : order) {
      const auto& ex = examples[idx];
      const auto& p = prepared[ex.doc];
      size_t len = ex.window.end - ex.window.begin;
      std::vector<float> start(len + 1, 0.0f), end(len + 1, 0.0f);
      float s[2] = {0, 0};
      layer_.accumulate(p.cls[ex.window_index], s);
      start[0] = s[0];
      end[0] = s[1];
      for (size_t i = 0; i < len; ++i) {
        float v[2] = {0, 0};
        layer_.accumulate(p.ids[ex.window.begin + i], v);
        start[i + 1] = v[0];
        end[i + 1] = v[1];
      }
      softmax(start);
      softmax(end);
      start[ex.start_target] -= 1.0f;
      end[ex.end_target] -= 1.0f;
      for (size_t i = 0; i <= len; ++i) {
        if (std::abs(start[i]) < 1e-6f && std::abs(end[i]) < 1e-6f) continue;
        float g[2] = {start[i], end[i]};
        const auto& ids = i == 0 ? p.cls[ex.window_index] : p.ids[ex.window.begin + i - 1];
        grad.add(ids, g);
      }
      if (++in_batch == hp.batch_size) {
        grad.scale(1.0f / in_batch);
        layer_.apply(grad, opt);
        grad.clear();
        in_batch = 0;
      }
    }
    if (in_batch > 0) {
      grad.scale(1.0f / in_batch);
      layer_.apply(grad, opt);
      grad.clear();
    }
  }
}

void BoundaryModel::save(const std::filesystem::path& path) const {
  save_linear(path, space_, layer_);
}

void BoundaryModel::load(const std::filesystem::path& path) {
  load_linear(path, &space_, &layer_);
  if (layer_.outputs() != 2) throw BackendError("boundary weights must have 2 outputs");
}

// ---------------------------------------------------------------------------

std::string qa_fingerprint(const std::vector<QaInstance>& instances) {
  std::string buf;
  for (const auto& qa : instances) {
    buf += qa.id;
    buf += '\x1f';
    buf += qa.question;
    buf += '\x1f';
    buf += std::to_string(fnv1a(qa.context));
    buf += '\x1f';
    buf += qa.is_impossible ? "-" : fmt::format("{}:{}", qa.answer.begin, qa.answer.end);
    buf += '\n';
  }
  return sha256_hex(buf);
}

SpanPrediction predict_segment(const BoundaryModelHandle& handle, const MinuteDocument& doc,
                               const BoundaryPrompt& prompt, double null_threshold) {
  if (doc.language != handle.language) {
    throw BackendError(fmt::format("doc '{}' is {} but the boundary model is {}", doc.doc_id,
                                   language_code(doc.language), language_code(handle.language)));
  }
  const auto& hp = handle.hyperparams;
  SpanPrediction pred = handle.model.predict(doc.text, doc.language, prompt.question_text,
                                             hp.max_length, hp.stride, hp.max_answer_tokens);
  if (!pred.span || pred.null_score - pred.span_score > null_threshold) {
    pred.span.reset();
  } else {
    pred.span = snap_to_sentences(doc.sentences, *pred.span);
  }
  return pred;
}

namespace {

double evaluate_qa(const BoundaryModelHandle& handle, const std::vector<QaInstance>& val,
                   double* em_out) {
  double em = 0, f1 = 0;
  for (const auto& qa : val) {
    MinuteDocument doc;
    doc.doc_id = qa.doc_id;
    doc.language = handle.language;
    doc.text = qa.context;
    doc.sentences = sentence_split(doc.text, doc.language);
    SpanPrediction p = predict_segment(handle, doc, handle.prompt(qa.segment_type));
    std::optional<std::string> pred, gold;
    if (p.span) pred = std::string(slice(doc.text, *p.span));
    if (!qa.is_impossible) gold = qa.answer_text;
    em += squad_em(pred, gold);
    f1 += squad_f1(pred, gold);
  }
  if (val.empty()) {
    *em_out = 0;
    return 0;
  }
  *em_out = em / val.size();
  return f1 / val.size();
}

}  // namespace

BoundaryModelHandle train_boundary(const std::vector<QaInstance>& train,
                                   const std::vector<QaInstance>& val, Language lang,
                                   const BoundaryHyperparams& hp,
                                   const std::map<SegmentType, BoundaryPrompt>& prompts) {
  if (train.empty()) throw DataError("empty boundary training set");
  BoundaryModelHandle handle;
  handle.hyperparams = hp;
  handle.language = lang;
  handle.prompts = prompts;
  for (SegmentType t : {SegmentType::kOpening, SegmentType::kClosing}) {
    if (!handle.prompts.count(t)) handle.prompts[t] = default_prompt(t, lang);
  }
  std::vector<BoundaryTrainingDoc> docs;
  for (const auto& qa : train) {
    if (qa.question != handle.prompt(qa.segment_type).question_text) {
      throw DataError("training instance '" + qa.id + "' uses a different prompt");
    }
    docs.push_back({qa, lang});
  }
  handle.model.fit(docs, hp);
  handle.data_fingerprint = qa_fingerprint(train);
  handle.metrics["train_instances"] = train.size();
  handle.metrics["features"] = handle.model.num_features();
  if (!val.empty()) {
    double em = 0;
    double f1 = evaluate_qa(handle, val, &em);
    handle.metrics["val_em"] = em;
    handle.metrics["val_f1"] = f1;
  }
  return handle;
}

void save_boundary(const BoundaryModelHandle& handle, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::path tmp = dir;
  tmp += ".tmp";
  fs::remove_all(tmp);
  fs::create_directories(tmp / "model");
  handle.model.save(tmp / "model" / "weights.bin");
  ordered_json meta;
  meta["kind"] = "boundary";
  meta["language"] = language_code(handle.language);
  meta["hyperparams"] = handle.hyperparams.to_json();
  meta["prompts"] = ordered_json::object();
  for (const auto& [t, p] : handle.prompts) {
    meta["prompts"][std::string(segment_type_name(t))] = p.question_text;
  }
  meta["data_fingerprint"] = handle.data_fingerprint;
  meta["weights_sha256"] = [&] {
    std::ifstream in(tmp / "model" / "weights.bin", std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return sha256_hex(bytes);
  }();
  meta["metrics"] = handle.metrics;
  std::ofstream(tmp / "meta.json") << meta.dump(2) << '\n';
  fs::remove_all(dir);
  if (dir.has_parent_path()) fs::create_directories(dir.parent_path());
  fs::rename(tmp, dir);
}

BoundaryModelHandle load_boundary(const std::filesystem::path& dir) {
  std::ifstream in(dir / "meta.json");
  if (!in) throw BackendError("no boundary checkpoint at '" + dir.string() + "'");
  json meta;
  try {
    meta = json::parse(in);
  } catch (const json::exception& e) {
    throw BackendError(std::string("corrupt meta.json: ") + e.what());
  }
  if (meta.value("kind", "") != "boundary") {
    throw BackendError("'" + dir.string() + "' is not a boundary checkpoint");
  }
  BoundaryModelHandle handle;
  handle.language = parse_language(meta.at("language").get<std::string>());
  handle.hyperparams = BoundaryHyperparams::from_json(meta.at("hyperparams"));
  for (auto& [name, q] : meta.at("prompts").items()) {
    SegmentType t = name == "opening" ? SegmentType::kOpening : SegmentType::kClosing;
    handle.prompts[t] = {t, q.get<std::string>()};
  }
  handle.data_fingerprint = meta.value("data_fingerprint", "");
  handle.metrics = meta.value("metrics", ordered_json::object());
  std::ifstream w(dir / "model" / "weights.bin", std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(w)), std::istreambuf_iterator<char>());
  if (meta.contains("weights_sha256") && sha256_hex(bytes) != meta["weights_sha256"]) {
    throw BackendError("boundary weights do not match meta.json fingerprint");
  }
  handle.model.load(dir / "model" / "weights.bin");
  return handle;
}

ordered_json prediction_json(const MinuteDocument& doc, SegmentType type,
                             const SpanPrediction& p) {
  Utf8Offsets offsets(doc.text);
  ordered_json j;
  j["doc_id"] = doc.doc_id;
  j["segment_type"] = segment_type_name(type);
  if (p.span) {
    j["start"] = offsets.to_codepoint(p.span->begin);
    j["end"] = offsets.to_codepoint(p.span->end);
  } else {
    j["start"] = nullptr;
    j["end"] = nullptr;
  }
  j["span_score"] = p.span_score;
  j["null_score"] = p.null_score;
  return j;
}

}  // namespace miner
