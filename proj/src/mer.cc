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

#include "miner/mer.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <fmt/core.h>

#include "miner/errors.h"
#include "miner/hash.h"
#include "miner/metrics.h"

namespace miner {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<int> repair_bio(const std::vector<int>& tags) {
  std::vector<int> out = tags;
  for (size_t t = 0; t < out.size(); ++t) {
    if (!tag_is_inside(out[t])) continue;
    int label = tag_label(out[t]);
    if (t == 0 || tag_label(out[t - 1]) != label) out[t] = begin_tag(label);
  }
  return out;
}

bool is_valid_bio(const std::vector<int>& tags) {
  for (size_t t = 0; t < tags.size(); ++t) {
    if (tag_is_inside(tags[t]) && (t == 0 || tag_label(tags[t - 1]) != tag_label(tags[t]))) {
      return false;
    }
  }
  return true;
}

std::vector<Entity> decode_entities(std::string_view text, const TagSequence& seq,
                                    const LabelInventory& labels,
                                    const std::vector<double>& token_probs) {
  if (seq.tags.size() != seq.tokens.size()) throw DimensionError("tags and tokens differ in length");
  std::vector<int> tags = repair_bio(seq.tags);
  std::vector<Entity> out;
  for (size_t t = 0; t < tags.size();) {
    if (!tag_is_begin(tags[t])) {
      ++t;
      continue;
    }
    int label = tag_label(tags[t]);
    size_t last = t;
    while (last + 1 < tags.size() && tags[last + 1] == inside_tag(label)) ++last;
    Entity e;
    e.category = labels.category(label);
    e.first_token = t;
    e.last_token = last;
    e.span = {seq.tokens[t].begin, seq.tokens[last].end};
    e.surface = std::string(slice(text, e.span));
    if (!token_probs.empty()) {
      double sum = 0;
      for (size_t k = t; k <= last; ++k) sum += token_probs[k];
      e.confidence = sum / (last - t + 1);
    }
    out.push_back(std::move(e));
    t = last + 1;
  }
  return out;
}

std::vector<EntityAnnotation> to_annotations(const std::vector<Entity>& entities) {
  std::vector<EntityAnnotation> out;
  for (const auto& e : entities) out.push_back({e.category, e.span, e.surface});
  return out;
}

ordered_json NerHyperparams::to_json() const {
  ordered_json j;
  j["epochs"] = epochs;
  j["patience"] = patience;
  j["batch_size"] = batch_size;
  j["grad_accum"] = grad_accum;
  j["learning_rate"] = learning_rate;
  j["weight_decay"] = weight_decay;
  j["max_length"] = max_length;
  j["stride"] = stride;
  j["use_crf"] = use_crf;
  j["mask_transitions"] = mask_transitions;
  j["seed"] = seed;
  return j;
}

NerHyperparams NerHyperparams::from_json(const json& j) {
  NerHyperparams hp;
  hp.epochs = j.value("epochs", hp.epochs);
  hp.patience = j.value("patience", hp.patience);
  hp.batch_size = j.value("batch_size", hp.batch_size);
  hp.grad_accum = j.value("grad_accum", hp.grad_accum);
  hp.learning_rate = j.value("learning_rate", hp.learning_rate);
  hp.weight_decay = j.value("weight_decay", hp.weight_decay);
  hp.max_length = j.value("max_length", hp.max_length);
  hp.stride = j.value("stride", hp.stride);
  hp.use_crf = j.value("use_crf", hp.use_crf);
  hp.mask_transitions = j.value("mask_transitions", hp.mask_transitions);
  hp.seed = j.value("seed", hp.seed);
  if (hp.epochs <= 0 || hp.patience <= 0 || hp.batch_size <= 0 || hp.grad_accum <= 0 ||
      hp.learning_rate <= 0 || hp.weight_decay < 0 || hp.max_length <= 2 || hp.stride < 0) {
    throw ConfigError("entity model hyperparameters must be positive");
  }
  return hp;
}

NerExample make_ner_example(const AnnotatedMinute& minute, RegionMode mode) {
  NerExample ex;
  ex.doc_id = minute.doc.doc_id;
  ex.language = minute.doc.language;
  if (mode == RegionMode::kFullDocument) {
    ex.text = minute.doc.text;
    ex.annotations = minute.entities;
  } else {
    ReducedRegion region = gold_region(minute);
    ex.text = region.text;
    ex.annotations = annotations_in_region(minute, region);
  }
  return ex;
}

void check_no_placeholder(const std::string& doc_id, std::string_view text,
                          std::string_view placeholder) {
  if (!placeholder.empty() && text.find(placeholder) != std::string_view::npos) {
    throw DataError(fmt::format("doc '{}': evaluation input contains the placeholder '{}'",
                                doc_id, placeholder));
  }
}

// ---------------------------------------------------------------------------
// Features

namespace {

std::string bucket(size_t n) {
  if (n < 4) return std::to_string(n);
  size_t b = 1;
  while (b * 2 <= n) b *= 2;
  return std::to_string(b);
}

std::string first_codepoints(std::string_view s, size_t k, bool from_end) {
  std::vector<size_t> starts;
  for (size_t pos = 0; pos < s.size();) {
    starts.push_back(pos);
    size_t len = 1;
    decode_utf8(s, pos, &len);
    pos += len;
  }
  if (starts.size() <= k) return std::string(s);
  return from_end ? std::string(s.substr(starts[starts.size() - k]))
                  : std::string(s.substr(0, starts[k]));
}

// A lowercase alphabetic word of at least three letters: the kind of word
// that cues the role of nearby names and numbers.
bool is_cue_word(std::string_view raw, std::string_view shape) {
  return raw.size() >= 3 && shape == "x";
}

struct EncodedText {
  std::vector<Span> tokens;
  std::vector<std::string> words;
  std::vector<std::string> pieces;
  std::vector<size_t> first_piece;
  std::vector<std::vector<uint64_t>> keys;
};

EncodedText encode_text(const std::string& text, Language lang, const SubwordVocab& vocab) {
  EncodedText enc;
  enc.tokens = tokenize_words(text);
  const size_t n = enc.tokens.size();
  std::vector<std::string> lower(n), folded(n), shape(n);
  std::vector<std::vector<std::string>> pieces_of(n);
  for (size_t t = 0; t < n; ++t) {
    enc.words.emplace_back(slice(text, enc.tokens[t]));
    lower[t] = to_lower(enc.words[t]);
    folded[t] = fold_diacritics(enc.words[t], nullptr);
    shape[t] = word_shape(enc.words[t]);
    pieces_of[t] = vocab.split(enc.words[t]);
    enc.first_piece.push_back(enc.pieces.size());
    for (auto& p : pieces_of[t]) enc.pieces.push_back(p);
  }

  std::vector<Span> sentences = sentence_split(text, lang);
  std::vector<size_t> sent_id(n, sentences.size());
  for (size_t t = 0, s = 0; t < n; ++t) {
    while (s < sentences.size() && sentences[s].end <= enc.tokens[t].begin) ++s;
    if (s < sentences.size() && sentences[s].contains(enc.tokens[t].begin)) sent_id[t] = s;
  }
  std::vector<size_t> sent_first(n, 0), sent_end(n, n);
  for (size_t t = 0; t < n;) {
    size_t e = t + 1;
    while (e < n && sent_id[e] == sent_id[t]) ++e;
    for (size_t k = t; k < e; ++k) {
      sent_first[k] = t;
      sent_end[k] = e;
    }
    t = e;
  }

  auto word_at = [&](long t) -> std::string_view {
    if (t < 0) return "<s>";
    if (t >= static_cast<long>(n)) return "</s>";
    return lower[t];
  };
  auto shape_at = [&](long t) -> std::string_view {
    if (t < 0) return "<s>";
    if (t >= static_cast<long>(n)) return "</s>";
    return shape[t];
  };

  enc.keys.resize(n);
  FeatureBag bag;
  for (size_t i = 0; i < n; ++i) {
    const long t = static_cast<long>(i);
    bag.clear();
    bag.add("bias");
    bag.add("w", lower[i]);
    bag.add("f", folded[i]);
    bag.add("sh", shape[i]);
    bag.add("p3", first_codepoints(folded[i], 3, false));
    bag.add("s3", first_codepoints(folded[i], 3, true));
    bag.add("p0", pieces_of[i].front());
    bag.add("np", bucket(pieces_of[i].size()));
    for (long d : {-3L, -2L, -1L, 1L, 2L, 3L}) {
      bag.add(fmt::format("w{:+d}", d), word_at(t + d));
    }
    for (long d : {-2L, -1L, 1L, 2L}) {
      bag.add(fmt::format("sh{:+d}", d), shape_at(t + d));
    }
    bag.add("w-1|w", fmt::format("{}|{}", word_at(t - 1), word_at(t)));
    bag.add("w|w+1", fmt::format("{}|{}", word_at(t), word_at(t + 1)));
    bag.add("w-2|w-1", fmt::format("{}|{}", word_at(t - 2), word_at(t - 1)));
    bag.add("w+1|w+2", fmt::format("{}|{}", word_at(t + 1), word_at(t + 2)));
    bag.add("sh-1|sh|sh+1",
            fmt::format("{}|{}|{}", shape_at(t - 1), shape_at(t), shape_at(t + 1)));
    bag.add("w-1|sh", fmt::format("{}|{}", word_at(t - 1), shape[i]));
    bag.add("sh|w+1", fmt::format("{}|{}", shape[i], word_at(t + 1)));

    const size_t sf = sent_first[i], se = sent_end[i];
    bag.add("sf", lower[sf]);
    bag.add("sp", bucket(i - sf));
    bag.add("spe", bucket(se - 1 - i));
    int seen = 0;
    for (long k = t - 1; k >= static_cast<long>(sf) && seen < 6; --k) {
      if (!is_cue_word(enc.words[k], shape[k])) continue;
      bag.add(seen == 0 ? "lc1" : "lc", folded[k]);
      if (seen == 0) bag.add("lc1|sh", folded[k] + "|" + shape[i]);
      ++seen;
    }
    if (seen == 0) bag.add("lc1", "<none>");
    seen = 0;
    for (size_t k = i + 1; k < se && seen < 6; ++k) {
      if (!is_cue_word(enc.words[k], shape[k])) continue;
      bag.add(seen == 0 ? "rc1" : "rc", folded[k]);
      ++seen;
    }
    if (seen == 0) bag.add("rc1", "<none>");
    int bow = 0;
    for (size_t k = sf; k < se && bow < 40; ++k) {
      if (k == i || !is_cue_word(enc.words[k], shape[k])) continue;
      bag.add("sb", folded[k]);
      ++bow;
    }
    enc.keys[i] = bag.keys();
  }
  return enc;
}

struct Window {
  size_t begin = 0;  // word range [begin, end)
  size_t end = 0;
};

// Word windows covering the text, derived from windows over subword pieces
// (two positions reserved for the encoder's special tokens).
std::vector<Window> word_windows(const EncodedText& enc, const NerHyperparams& hp) {
  std::vector<Window> out;
  size_t max_len = static_cast<size_t>(hp.max_length - 2);
  size_t stride = std::min<size_t>(hp.stride, max_len - 1);
  for (const auto& w : chunk_with_stride(enc.pieces.size(), max_len, stride)) {
    Window win;
    win.begin = std::lower_bound(enc.first_piece.begin(), enc.first_piece.end(), w.begin) -
                enc.first_piece.begin();
    win.end = std::lower_bound(enc.first_piece.begin(), enc.first_piece.end(), w.end) -
              enc.first_piece.begin();
    if (win.end > win.begin) out.push_back(win);
  }
  return out;
}

void emissions_for(const LinearLayer& layer, const std::vector<std::vector<uint32_t>>& ids,
                   size_t begin, size_t end, int num_tags, Emissions* out) {
  out->assign(end - begin, std::vector<double>(num_tags, 0.0));
  std::vector<float> buf(num_tags);
  for (size_t t = begin; t < end; ++t) {
    std::fill(buf.begin(), buf.end(), 0.0f);
    layer.accumulate(ids[t], buf);
    for (int y = 0; y < num_tags; ++y) (*out)[t - begin][y] = buf[y];
  }
}

// Decodes one window: tags and the probability of each chosen tag.
void decode_window(const Emissions& e, const std::optional<CrfParameters>& crf,
                   std::vector<int>* tags, std::vector<double>* probs) {
  const size_t n = e.size();
  tags->assign(n, 0);
  probs->assign(n, 0.0);
  if (crf) {
    *tags = viterbi_decode(e, *crf);
    Emissions m = tag_marginals(e, *crf);
    for (size_t t = 0; t < n; ++t) (*probs)[t] = m[t][(*tags)[t]];
    return;
  }
  for (size_t t = 0; t < n; ++t) {
    std::vector<float> p(e[t].begin(), e[t].end());
    softmax(p);
    int best = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
    (*tags)[t] = best;
    (*probs)[t] = p[best];
  }
  *tags = repair_bio(*tags);
}

TaggedRegion tag_encoded(const NerModelHandle& handle, const EncodedText& enc) {
  TaggedRegion out;
  out.sequence.tokens = enc.tokens;
  const size_t n = enc.tokens.size();
  if (n == 0) return out;
  const int T = handle.labels.num_tags();
  std::vector<std::vector<uint32_t>> ids(n);
  for (size_t t = 0; t < n; ++t) ids[t] = handle.space.lookup(enc.keys[t]);
  emissions_for(handle.layer, ids, 0, n, T, &out.emissions);
  out.sequence.tags.assign(n, 0);
  out.token_probs.assign(n, -1.0);
  std::vector<int> tags;
  std::vector<double> probs;
  for (const Window& w : word_windows(enc, handle.hyperparams)) {
    Emissions e(out.emissions.begin() + w.begin, out.emissions.begin() + w.end);
    decode_window(e, handle.crf, &tags, &probs);
    for (size_t k = 0; k < tags.size(); ++k) {
      if (probs[k] > out.token_probs[w.begin + k]) {
        out.sequence.tags[w.begin + k] = tags[k];
        out.token_probs[w.begin + k] = probs[k];
      }
    }
  }
  out.sequence.tags = repair_bio(out.sequence.tags);
  return out;
}

}  // namespace

TaggedRegion tag_text(const NerModelHandle& handle, const std::string& text, Language lang) {
  if (lang != handle.language) {
    throw BackendError(fmt::format("input is {} but the entity model is {}", language_code(lang),
                                   language_code(handle.language)));
  }
  return tag_encoded(handle, encode_text(text, lang, handle.vocab));
}

TaggedRegion tag(const NerModelHandle& handle, const ReducedRegion& region, Language lang) {
  if (region.empty_flag || region.text.empty()) return {};
  return tag_text(handle, region.text, lang);
}

std::vector<Entity> region_entities(const NerModelHandle& handle, const ReducedRegion& region,
                                    const TaggedRegion& tagged) {
  std::vector<Entity> out;
  for (auto& e : decode_entities(region.text, tagged.sequence, handle.labels, tagged.token_probs)) {
    auto source = region.span_to_source(e.span);
    if (!source) continue;
    e.span = *source;
    out.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Training

namespace {

struct PreparedExample {
  EncodedText enc;
  std::vector<std::vector<uint32_t>> ids;
  std::vector<int> gold;
  std::vector<Window> windows;
};

std::string examples_fingerprint(const std::vector<NerExample>& examples,
                                 const LabelInventory& labels) {
  std::string buf;
  for (const auto& ex : examples) {
    buf += ex.doc_id;
    buf += '\x1f';
    buf += std::to_string(fnv1a(ex.text));
    for (const auto& a : ex.annotations) {
      buf += fmt::format("|{}:{}:{}", labels.label_of(a.category), a.span.begin, a.span.end);
    }
    buf += '\n';
  }
  return sha256_hex(buf);
}

double evaluate(const NerModelHandle& handle, const std::vector<NerExample>& examples) {
  std::vector<ScoredDocument> docs;
  for (const auto& ex : examples) {
    ScoredDocument d{ex.doc_id, ex.text.size(), {}, ex.annotations};
    if (!ex.text.empty()) {
      TaggedRegion tagged = tag_text(handle, ex.text, ex.language);
      d.pred = to_annotations(
          decode_entities(ex.text, tagged.sequence, handle.labels, tagged.token_probs));
    }
    docs.push_back(std::move(d));
  }
  return entity_prf(docs).micro.f1();
}

// AdaGrad on the dense CRF parameters; masked (-inf) entries stay fixed.
struct CrfOptimizer {
  std::vector<double> sq_transition, sq_start, sq_end;

  static void step(std::vector<double>* w, std::vector<double>* sq, const std::vector<double>& g,
                   double lr) {
    if (sq->size() != w->size()) sq->assign(w->size(), 0.0);
    for (size_t i = 0; i < w->size(); ++i) {
      if (std::isinf((*w)[i]) || g[i] == 0.0) continue;
      (*sq)[i] += g[i] * g[i];
      (*w)[i] -= lr * g[i] / (std::sqrt((*sq)[i]) + 1e-6);
    }
  }

  void apply(CrfParameters* crf, const CrfGradient& g, double lr) {
    step(&crf->transition, &sq_transition, g.transition, lr);
    step(&crf->start, &sq_start, g.start, lr);
    step(&crf->end, &sq_end, g.end, lr);
  }
};

void add_into(CrfGradient* acc, const CrfGradient& g) {
  if (acc->transition.empty()) {
    acc->transition.assign(g.transition.size(), 0.0);
    acc->start.assign(g.start.size(), 0.0);
    acc->end.assign(g.end.size(), 0.0);
  }
  for (size_t i = 0; i < g.transition.size(); ++i) acc->transition[i] += g.transition[i];
  for (size_t i = 0; i < g.start.size(); ++i) acc->start[i] += g.start[i];
  for (size_t i = 0; i < g.end.size(); ++i) acc->end[i] += g.end[i];
}

}  // namespace

NerModelHandle train_ner_examples(const std::vector<NerExample>& train,
                                  const std::vector<NerExample>& val, const LabelInventory& labels,
                                  const NerHyperparams& hp, const NerModelHandle* warm_start) {
  std::vector<const NerExample*> usable;
  for (const auto& ex : train) {
    if (!ex.text.empty()) usable.push_back(&ex);
  }
  if (usable.empty()) throw DataError("empty entity training set");
  const Language lang = usable.front()->language;
  for (const auto* ex : usable) {
    if (ex->language != lang) throw DataError("entity training set mixes languages");
  }

  NerModelHandle handle;
  if (warm_start) {
    if (!(warm_start->labels == labels)) {
      throw DataError("label inventory differs from the warm-start model");
    }
    handle = *warm_start;
    handle.layer.reset_optimizer();
  } else {
    std::vector<std::string> words;
    for (const auto* ex : usable) {
      for (const Span& t : tokenize_words(ex->text)) words.emplace_back(slice(ex->text, t));
    }
    handle.vocab = SubwordVocab::learn(words);
    handle.layer = LinearLayer(labels.num_tags());
    if (hp.use_crf) {
      handle.crf = CrfParameters::zeros(labels.num_tags());
      if (hp.mask_transitions) mask_bio_transitions(&*handle.crf);
    }
  }
  handle.labels = labels;
  handle.hyperparams = hp;
  handle.language = lang;
  if (hp.use_crf && !handle.crf) {
    handle.crf = CrfParameters::zeros(labels.num_tags());
    if (hp.mask_transitions) mask_bio_transitions(&*handle.crf);
  }
  if (!hp.use_crf) handle.crf.reset();

  const int T = labels.num_tags();
  std::vector<PreparedExample> prepared;
  for (const auto* ex : usable) {
    PreparedExample p;
    p.enc = encode_text(ex->text, lang, handle.vocab);
    TagSequence gold = to_bio(ex->text, p.enc.tokens, ex->annotations, labels);
    p.gold = gold.tags;
    // Plumbing check: first-piece labels must line up with the words.
    std::vector<int> word_labels = p.gold;
    align_subwords(p.enc.words, p.enc.pieces, word_labels);
    for (const auto& keys : p.enc.keys) p.ids.push_back(handle.space.lookup(keys, true));
    p.windows = word_windows(p.enc, hp);
    prepared.push_back(std::move(p));
  }
  handle.layer.resize(handle.space.size());

  struct Item {
    size_t example;
    Window window;
  };
  std::vector<Item> items;
  for (size_t e = 0; e < prepared.size(); ++e) {
    for (const auto& w : prepared[e].windows) items.push_back({e, w});
  }

  OptimizerConfig opt{hp.learning_rate, hp.weight_decay};
  CrfOptimizer crf_opt;
  std::mt19937_64 rng(hp.seed);
  GradientBuffer grad(T);
  CrfGradient crf_acc;
  const int per_update = hp.batch_size * hp.grad_accum;

  double best_f1 = -1.0;
  int best_epoch = 0, bad_epochs = 0;
  LinearLayer best_layer = handle.layer;
  std::optional<CrfParameters> best_crf = handle.crf;
  json history = json::array();

  for (int epoch = 1; epoch <= hp.epochs; ++epoch) {
    std::vector<size_t> order(items.size());
    std::iota(order.begin(), order.end(), 0);
    for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    int pending = 0;
    double loss = 0.0;
    auto flush = [&] {
      if (pending == 0) return;
      grad.scale(1.0f / pending);
      handle.layer.apply(grad, opt);
      grad.clear();
      if (handle.crf && !crf_acc.transition.empty()) {
        for (auto& v : crf_acc.transition) v /= pending;
        for (auto& v : crf_acc.start) v /= pending;
        for (auto& v : crf_acc.end) v /= pending;
        crf_opt.apply(&*handle.crf, crf_acc, hp.learning_rate);
        crf_acc = CrfGradient{};
      }
      pending = 0;
    };
    for (size_t idx : order) {
      const auto& item = items[idx];
      const auto& p = prepared[item.example];
      Emissions e;
      emissions_for(handle.layer, p.ids, item.window.begin, item.window.end, T, &e);
      std::vector<int> gold(p.gold.begin() + item.window.begin, p.gold.begin() + item.window.end);
      std::vector<float> g(T);
      if (handle.crf) {
        CrfGradient cg;
        loss += crf_nll(e, *handle.crf, gold, &cg);
        for (size_t t = 0; t < e.size(); ++t) {
          for (int y = 0; y < T; ++y) g[y] = static_cast<float>(cg.emissions[t][y]);
          grad.add(p.ids[item.window.begin + t], g);
        }
        add_into(&crf_acc, cg);
      } else {
        for (size_t t = 0; t < e.size(); ++t) {
          for (int y = 0; y < T; ++y) g[y] = static_cast<float>(e[t][y]);
          double lse = softmax(g);
          loss += lse - e[t][gold[t]];
          g[gold[t]] -= 1.0f;
          grad.add(p.ids[item.window.begin + t], g);
        }
      }
      if (++pending == per_update) flush();
    }
    flush();

    json entry{{"epoch", epoch}, {"train_loss", loss}};
    if (!val.empty()) {
      double f1 = evaluate(handle, val);
      entry["val_f1"] = f1;
      if (f1 > best_f1) {
        best_f1 = f1;
        best_epoch = epoch;
        best_layer = handle.layer;
        best_crf = handle.crf;
        bad_epochs = 0;
      } else if (++bad_epochs >= hp.patience) {
        history.push_back(entry);
        break;
      }
    } else {
      best_epoch = epoch;
      best_layer = handle.layer;
      best_crf = handle.crf;
    }
    history.push_back(entry);
  }
  handle.layer = std::move(best_layer);
  handle.crf = std::move(best_crf);
  handle.layer.reset_optimizer();
  handle.data_fingerprint = examples_fingerprint(train, labels);
  handle.metrics["best_epoch"] = best_epoch;
  if (best_f1 >= 0) handle.metrics["val_f1"] = best_f1;
  handle.metrics["history"] = history;
  handle.metrics["features"] = handle.space.size();
  handle.metrics["train_examples"] = usable.size();
  return handle;
}

NerModelHandle train_ner(const std::vector<AnnotatedMinute>& train,
                         const std::vector<AnnotatedMinute>& val, const LabelInventory& labels,
                         const NerHyperparams& hp, RegionMode mode,
                         const std::optional<DeslexPolicy>& deslex,
                         const NerModelHandle* warm_start) {
  std::vector<NerExample> train_ex, val_ex;
  for (const auto& m : train) {
    train_ex.push_back(make_ner_example(deslex ? deslexicalize(m, *deslex) : m, mode));
  }
  for (const auto& m : val) {
    val_ex.push_back(make_ner_example(m, mode));
    if (deslex) {
      check_no_placeholder(m.doc.doc_id, val_ex.back().text, deslex->municipality_placeholder);
    }
  }
  NerModelHandle handle = train_ner_examples(train_ex, val_ex, labels, hp, warm_start);
  handle.region_mode = mode;
  if (deslex) {
    handle.deslex = true;
    handle.deslex_policy = deslex->to_json();
  }
  return handle;
}

double ner_micro_f1(const NerModelHandle& handle, const std::vector<NerExample>& examples) {
  return evaluate(handle, examples);
}

// ---------------------------------------------------------------------------
// Checkpoints

void save_ner(const NerModelHandle& handle, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::path tmp = dir;
  tmp += ".tmp";
  fs::remove_all(tmp);
  fs::create_directories(tmp / "model");
  save_linear(tmp / "model" / "weights.bin", handle.space, handle.layer);
  std::ofstream(tmp / "model" / "vocab.json") << handle.vocab.to_json().dump() << '\n';
  if (handle.crf) std::ofstream(tmp / "crf.json") << handle.crf->to_json().dump(1) << '\n';
  ordered_json meta;
  meta["kind"] = "entity";
  meta["language"] = language_code(handle.language);
  meta["region_mode"] = handle.region_mode == RegionMode::kSegments ? "segments" : "full_document";
  meta["labels"] = ordered_json::array();
  for (int l = 0; l < handle.labels.size(); ++l) {
    const Category& c = handle.labels.category(l);
    meta["labels"].push_back({{"kind", kind_name(c.kind)}, {"presence", presence_name(c.presence)}});
  }
  meta["hyperparams"] = handle.hyperparams.to_json();
  meta["deslex"] = handle.deslex;
  meta["deslex_policy"] = handle.deslex_policy;
  meta["data_fingerprint"] = handle.data_fingerprint;
  meta["metrics"] = handle.metrics;
  std::ofstream(tmp / "meta.json") << meta.dump(2) << '\n';
  fs::remove_all(dir);
  if (dir.has_parent_path()) fs::create_directories(dir.parent_path());
  fs::rename(tmp, dir);
}

NerModelHandle load_ner(const std::filesystem::path& dir) {
  std::ifstream in(dir / "meta.json");
  if (!in) throw BackendError("no entity checkpoint at '" + dir.string() + "'");
  json meta;
  try {
    meta = json::parse(in);
  } catch (const json::exception& e) {
    throw BackendError(std::string("corrupt meta.json: ") + e.what());
  }
  if (meta.value("kind", "") != "entity") {
    throw BackendError("'" + dir.string() + "' is not an entity checkpoint");
  }
  NerModelHandle handle;
  handle.language = parse_language(meta.at("language").get<std::string>());
  handle.region_mode =
      meta.value("region_mode", "segments") == "full_document" ? RegionMode::kFullDocument
                                                               : RegionMode::kSegments;
  std::vector<Category> cats;
  for (const auto& c : meta.at("labels")) {
    cats.push_back({parse_kind(c.at("kind").get<std::string>()),
                    parse_presence(c.at("presence").get<std::string>())});
  }
  handle.labels = LabelInventory::from_categories(cats);
  for (size_t l = 0; l < cats.size(); ++l) {
    if (!(handle.labels.category(static_cast<int>(l)) == cats[l])) {
      throw BackendError("label inventory in meta.json is not in canonical order");
    }
  }
  handle.hyperparams = NerHyperparams::from_json(meta.at("hyperparams"));
  handle.deslex = meta.value("deslex", false);
  handle.deslex_policy = meta.value("deslex_policy", ordered_json());
  handle.data_fingerprint = meta.value("data_fingerprint", "");
  handle.metrics = meta.value("metrics", ordered_json::object());
  std::ifstream vocab(dir / "model" / "vocab.json");
  if (!vocab) throw BackendError("entity checkpoint lacks model/vocab.json");
  handle.vocab = SubwordVocab::from_json(json::parse(vocab));
  load_linear(dir / "model" / "weights.bin", &handle.space, &handle.layer);
  if (handle.layer.outputs() != handle.labels.num_tags()) {
    throw BackendError("entity weights do not match the label inventory");
  }
  if (handle.hyperparams.use_crf) {
    std::ifstream crf(dir / "crf.json");
    if (!crf) throw BackendError("entity checkpoint lacks crf.json");
    handle.crf = CrfParameters::from_json(json::parse(crf));
    if (handle.crf->num_tags != handle.labels.num_tags()) {
      throw BackendError("CRF size does not match the label inventory");
    }
  }
  return handle;
}

}  // namespace miner
