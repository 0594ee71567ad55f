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

#include "miner/protocols.h"

#include <map>

#include "fmt/format.h"
#include "miner/errors.h"
#include "miner/retrieval.h"
#include "miner/splits.h"

namespace miner {

using nlohmann::ordered_json;

namespace {

constexpr SegmentType kSegmentTypes[] = {SegmentType::kOpening, SegmentType::kClosing};

std::vector<AnnotatedMinute> select(const Corpus& corpus, const std::vector<std::string>& ids) {
  std::vector<AnnotatedMinute> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(corpus.at(id));
  return out;
}

std::vector<const AnnotatedMinute*> pointers(const std::vector<AnnotatedMinute>& minutes) {
  std::vector<const AnnotatedMinute*> out;
  for (const auto& m : minutes) out.push_back(&m);
  return out;
}

std::map<SegmentType, BoundaryPrompt> default_prompts(Language lang) {
  return {{SegmentType::kOpening, default_prompt(SegmentType::kOpening, lang)},
          {SegmentType::kClosing, default_prompt(SegmentType::kClosing, lang)}};
}

std::vector<QaInstance> qa_instances(const std::vector<AnnotatedMinute>& minutes, Language lang) {
  auto prompts = default_prompts(lang);
  std::vector<QaInstance> out;
  for (const auto& m : minutes) {
    for (SegmentType type : kSegmentTypes) {
      SegmentAnnotation seg{type, m.segment(type)};
      out.push_back(to_squad_v2(m, seg, prompts.at(type)));
    }
  }
  return out;
}

// Minutes of one language; the protocols never mix languages in a model.
Corpus language_subset(const Corpus& corpus, Language lang) {
  std::vector<std::string> ids;
  for (const auto& m : corpus.minutes()) {
    if (m.doc.language == lang) ids.push_back(m.doc.doc_id);
  }
  if (ids.empty()) {
    throw DataError(fmt::format("corpus has no '{}' minutes", language_code(lang)));
  }
  return corpus.subset(ids);
}

double seconds_since(double start) { return steady_seconds() - start; }

ordered_json prf_json(const PrfCounts& c) {
  return {{"precision", c.precision()}, {"recall", c.recall()}, {"f1", c.f1()}};
}

}  // namespace

ordered_json QaScores::to_json() const {
  ordered_json j{{"em", em}, {"f1", f1}, {"questions", questions}};
  ordered_json seg = ordered_json::object();
  for (const auto& [type, s] : per_segment) seg[type] = {{"em", s.first}, {"f1", s.second}};
  j["per_segment"] = seg;
  return j;
}

QaScores score_segments(const std::vector<AnnotatedMinute>& test,
                        const std::vector<std::pair<SpanPrediction, SpanPrediction>>& predictions) {
  if (test.size() != predictions.size()) {
    throw DimensionError("one prediction pair per minute is required");
  }
  QaScores s;
  std::map<std::string, std::array<double, 3>> acc;  // em sum, f1 sum, count
  for (size_t i = 0; i < test.size(); ++i) {
    const auto& m = test[i];
    for (SegmentType type : kSegmentTypes) {
      const SpanPrediction& p =
          type == SegmentType::kOpening ? predictions[i].first : predictions[i].second;
      std::optional<std::string> gold, pred;
      if (auto g = m.segment(type)) gold = std::string(slice(m.doc.text, *g));
      if (p.span) pred = std::string(slice(m.doc.text, *p.span));
      const int em = squad_em(pred, gold);
      const double f1 = squad_f1(pred, gold);
      s.em += em;
      s.f1 += f1;
      ++s.questions;
      auto& a = acc[std::string(segment_type_name(type))];
      a[0] += em;
      a[1] += f1;
      a[2] += 1;
    }
  }
  if (s.questions > 0) {
    s.em /= s.questions;
    s.f1 /= s.questions;
  }
  for (const auto& [type, a] : acc) s.per_segment[type] = {a[0] / a[2], a[1] / a[2]};
  return s;
}

QaScores evaluate_boundary(const BoundaryModelHandle& qa, const std::vector<AnnotatedMinute>& test,
                           double null_threshold) {
  std::vector<std::pair<SpanPrediction, SpanPrediction>> preds;
  for (const auto& m : test) {
    preds.emplace_back(
        predict_segment(qa, m.doc, qa.prompt(SegmentType::kOpening), null_threshold),
        predict_segment(qa, m.doc, qa.prompt(SegmentType::kClosing), null_threshold));
  }
  return score_segments(test, preds);
}

namespace {

template <typename Segmenter>
QaScores evaluate_retrieval(const std::vector<AnnotatedMinute>& train,
                            const std::vector<AnnotatedMinute>& test, Segmenter segmenter) {
  auto ptrs = pointers(train);
  const int open_window = mean_segment_sentences(ptrs, SegmentType::kOpening);
  const int close_window = mean_segment_sentences(ptrs, SegmentType::kClosing);
  std::vector<std::pair<SpanPrediction, SpanPrediction>> preds;
  for (const auto& m : test) {
    const Language lang = m.doc.language;
    preds.emplace_back(
        segmenter(m.doc, default_prompt(SegmentType::kOpening, lang).question_text, open_window),
        segmenter(m.doc, default_prompt(SegmentType::kClosing, lang).question_text, close_window));
  }
  return score_segments(test, preds);
}

}  // namespace

QaScores evaluate_bm25(const std::vector<AnnotatedMinute>& train,
                       const std::vector<AnnotatedMinute>& test) {
  return evaluate_retrieval(train, test,
                            [](const MinuteDocument& d, std::string_view q, int w) {
                              return bm25_segment(d, q, w);
                            });
}

QaScores evaluate_dense(const std::vector<AnnotatedMinute>& train,
                        const std::vector<AnnotatedMinute>& test) {
  HashedNgramEmbedder embedder;
  return evaluate_retrieval(train, test,
                            [&](const MinuteDocument& d, std::string_view q, int w) {
                              return dense_segment(d, q, w, embedder);
                            });
}

std::vector<ScoredDocument> score_gold_regions(const NerModelHandle& ner,
                                               const std::vector<AnnotatedMinute>& test) {
  std::vector<ScoredDocument> docs;
  for (const auto& m : test) {
    ScoredDocument d{m.doc.doc_id, m.doc.text.size(), {}, m.entities};
    ReducedRegion region = gold_region(m);
    if (!region.empty_flag) {
      TaggedRegion tagged = tag(ner, region, m.doc.language);
      d.pred = to_annotations(region_entities(ner, region, tagged));
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

ordered_json ModelReport::to_json() const {
  ordered_json j;
  j["name"] = name;
  j["micro"] = scores.micro.to_json();
  j["per_category"] = scores.to_json()["per_category"];
  j["errors"] = errors.to_json();
  if (qa) j["qa"] = qa->to_json();
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

ModelReport make_model_report(std::string name, const std::vector<ScoredDocument>& docs) {
  ModelReport r;
  r.name = std::move(name);
  r.scores = entity_prf(docs);
  for (const auto& d : docs) r.errors += error_taxonomy(d.pred, d.gold);
  return r;
}

const ModelReport* EvalReport::model(std::string_view name) const {
  for (const auto& m : models) {
    if (m.name == name) return &m;
  }
  for (const auto& m : qa_models) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

ordered_json EvalReport::to_json() const {
  ordered_json j;
  j["protocol"] = protocol;
  j["models"] = ordered_json::array();
  for (const auto& m : models) j["models"].push_back(m.to_json());
  if (!qa_models.empty()) {
    j["boundary"] = ordered_json::array();
    for (const auto& m : qa_models) {
      ordered_json q{{"name", m.name}};
      if (m.qa) q.update(m.qa->to_json());
      if (!m.extra.empty()) q["extra"] = m.extra;
      j["boundary"].push_back(q);
    }
  }
  if (!folds.empty()) j["folds"] = folds;
  j["failures"] = ordered_json::array();
  for (const auto& [fold, msg] : failures) j["failures"].push_back({{"fold", fold}, {"error", msg}});
  if (resource) j["resource"] = resource->to_json(with_energy);
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

std::string EvalReport::to_table() const {
  std::string out = fmt::format("protocol: {}\n", protocol);
  if (!qa_models.empty()) {
    out += fmt::format("\n{:<24} {:>8} {:>8}\n", "boundary", "EM", "F1");
    for (const auto& m : qa_models) {
      if (m.qa) out += fmt::format("{:<24} {:>8.3f} {:>8.3f}\n", m.name, m.qa->em, m.qa->f1);
    }
  }
  if (!models.empty()) {
    out += fmt::format("\n{:<24} {:>8} {:>8} {:>8} {:>6} {:>6} {:>6}\n", "entities", "P", "R",
                       "F1", "TP", "FP", "FN");
    for (const auto& m : models) {
      const auto& c = m.scores.micro;
      out += fmt::format("{:<24} {:>8.3f} {:>8.3f} {:>8.3f} {:>6} {:>6} {:>6}\n", m.name,
                         c.precision(), c.recall(), c.f1(), c.tp, c.fp, c.fn);
    }
    out += fmt::format("\n{:<24} {:>9} {:>9} {:>9} {:>9}\n", "errors", "boundary", "type",
                       "spurious", "missed");
    for (const auto& m : models) {
      out += fmt::format("{:<24} {:>9} {:>9} {:>9} {:>9}\n", m.name, m.errors.boundary,
                         m.errors.type_confusion, m.errors.spurious, m.errors.missed);
    }
    const ModelReport& first = models.front();
    if (!first.scores.per_category.empty()) {
      out += fmt::format("\n{:<24} {:>8} {:>8} {:>8}   ({})\n", "category", "P", "R", "F1",
                         first.name);
      for (const auto& [label, c] : first.scores.per_category) {
        out += fmt::format("{:<24} {:>8.3f} {:>8.3f} {:>8.3f}\n", label, c.precision(),
                           c.recall(), c.f1());
      }
    }
  }
  if (resource) {
    out += fmt::format("\nwall_seconds {:.3f}", resource->wall_seconds);
    if (with_energy) {
      out += fmt::format("  energy_kWh {:.3e}  kg_CO2e {:.3e}", resource->energy_kwh,
                         resource->kg_co2e);
    }
    out += "\n";
  }
  for (const auto& [fold, msg] : failures) out += fmt::format("FAILED {}: {}\n", fold, msg);
  return out;
}

EvalReport run_global_eval(const Corpus& full, const ProtocolConfig& config, ResourceMeter* meter,
                           GlobalArtifacts* artifacts) {
  const Corpus corpus = language_subset(full, config.language);
  const CorpusSplit split = make_global_split(corpus, config.split_seed);
  const auto train = select(corpus, split.train);
  const auto val = select(corpus, split.val);
  const auto test = select(corpus, split.test);

  EvalReport report;
  report.protocol = "global";
  report.extra["split"] = split.to_json();

  double t = steady_seconds();
  BoundaryModelHandle qa =
      train_boundary(qa_instances(train, config.language), qa_instances(val, config.language),
                     config.language, config.boundary, default_prompts(config.language));
  ModelReport mbd;
  mbd.name = "mbd";
  mbd.extra["train_seconds"] = seconds_since(t);
  mbd.qa = evaluate_boundary(qa, test, config.pipeline.null_threshold);
  report.qa_models.push_back(mbd);
  if (config.baselines) {
    ModelReport bm25;
    bm25.name = "bm25";
    bm25.qa = evaluate_bm25(train, test);
    report.qa_models.push_back(bm25);
    ModelReport dense;
    dense.name = "dense";
    dense.qa = evaluate_dense(train, test);
    report.qa_models.push_back(dense);
  }

  t = steady_seconds();
  NerModelHandle ner = train_ner(train, val, corpus.labels(), config.ner, RegionMode::kSegments);
  ModelReport mer = make_model_report("mer", score_gold_regions(ner, test));
  mer.extra["train_seconds"] = seconds_since(t);
  mer.extra["best_epoch"] = ner.metrics.value("best_epoch", 0);
  report.models.push_back(mer);

  std::optional<NerModelHandle> ner_deslex;
  if (config.deslex) {
    t = steady_seconds();
    ner_deslex = train_ner(train, val, corpus.labels(), config.ner, RegionMode::kSegments,
                           config.deslex);
    ModelReport r = make_model_report("mer_deslex", score_gold_regions(*ner_deslex, test));
    r.extra["train_seconds"] = seconds_since(t);
    report.models.push_back(r);
  }

  std::vector<MinuteDocument> docs;
  for (const auto& m : test) docs.push_back(m.doc);
  BatchResult batch = batch_extract(docs, qa, ner, config.pipeline, meter);
  std::vector<ScoredDocument> scored;
  size_t region_tokens = 0, document_tokens = 0;
  for (size_t i = 0; i < batch.records.size(); ++i) {
    const auto& rec = batch.records[i];
    const auto& gold = corpus.at(rec.doc_id);
    scored.push_back({rec.doc_id, gold.doc.text.size(), rec.entities, gold.entities});
    region_tokens += batch.traces[i].region_tokens;
    document_tokens += batch.traces[i].document_tokens;
  }
  for (const auto& e : batch.errors) {
    const auto& gold = corpus.at(e.doc_id);
    scored.push_back({e.doc_id, gold.doc.text.size(), {}, gold.entities});
    report.failures.emplace_back(e.doc_id, e.message);
  }
  ModelReport pipe = make_model_report("pipeline", scored);
  pipe.extra["region_tokens"] = region_tokens;
  pipe.extra["document_tokens"] = document_tokens;
  pipe.extra["token_reduction"] =
      document_tokens ? 1.0 - static_cast<double>(region_tokens) / document_tokens : 0.0;
  ordered_json latency = ordered_json::array();
  for (const auto& [id, r] : batch.per_document) {
    latency.push_back({{"doc_id", id}, {"wall_seconds", r.wall_seconds}});
  }
  pipe.extra["per_document"] = latency;
  report.models.push_back(pipe);
  report.resource = batch.total;
  report.with_energy = meter != nullptr;

  if (artifacts) {
    artifacts->qa = std::move(qa);
    artifacts->ner = std::move(ner);
    artifacts->ner_deslex = std::move(ner_deslex);
  }
  return report;
}

EvalReport run_leave_one_out(const Corpus& full, const ProtocolConfig& config) {
  const Corpus corpus = language_subset(full, config.language);
  EvalReport report;
  report.protocol = "leave_one_out";
  std::vector<ScoredDocument> pooled, pooled_deslex;
  for (const CorpusSplit& split : make_leave_one_out(corpus, config.split_seed)) {
    const std::string fold = split.name;
    try {
      const auto train = select(corpus, split.train);
      const auto val = select(corpus, split.val);
      const auto test = select(corpus, split.test);
      NerModelHandle ner = train_ner(train, val, corpus.labels(), config.ner);
      auto docs = score_gold_regions(ner, test);
      ModelReport r = make_model_report(fold, docs);
      ordered_json f{{"fold", fold}, {"test_documents", test.size()}, {"mer", prf_json(r.scores.micro)}};
      std::vector<ScoredDocument> docs_deslex;
      if (config.deslex) {
        NerModelHandle nd = train_ner(train, val, corpus.labels(), config.ner,
                                      RegionMode::kSegments, config.deslex);
        docs_deslex = score_gold_regions(nd, test);
        f["mer_deslex"] = prf_json(entity_prf(docs_deslex).micro);
      }
      pooled.insert(pooled.end(), docs.begin(), docs.end());
      pooled_deslex.insert(pooled_deslex.end(), docs_deslex.begin(), docs_deslex.end());
      report.folds.push_back(f);
    } catch (const std::exception& e) {
      report.failures.emplace_back(fold, e.what());
    }
  }
  report.models.push_back(make_model_report("mer", pooled));
  if (config.deslex) report.models.push_back(make_model_report("mer_deslex", pooled_deslex));
  return report;
}

EvalReport run_incremental(const Corpus& full, const std::string& municipality,
                           const ProtocolConfig& config) {
  const Corpus corpus = language_subset(full, config.language);
  const auto series =
      make_incremental_series(corpus, municipality, config.k_max, config.split_seed);
  EvalReport report;
  report.protocol = "incremental";
  report.extra["municipality"] = municipality;
  report.extra["test"] = series.front().test;

  const auto test = select(corpus, series.front().test);
  const NerModelHandle base =
      train_ner(select(corpus, series.front().train), select(corpus, series.front().val),
                corpus.labels(), config.ner, RegionMode::kSegments, config.deslex);
  NerHyperparams hp = config.ner;
  hp.epochs = config.incremental_epochs;
  ordered_json curve = ordered_json::array();
  for (const auto& step : series) {
    const std::string name = fmt::format("k={}", step.k);
    try {
      std::vector<ScoredDocument> docs;
      if (step.k == 0) {
        docs = score_gold_regions(base, test);
      } else {
        NerModelHandle tuned = train_ner(select(corpus, step.extra_train), {}, corpus.labels(), hp,
                                         RegionMode::kSegments, config.deslex, &base);
        docs = score_gold_regions(tuned, test);
      }
      ModelReport r = make_model_report(name, docs);
      ordered_json point = prf_json(r.scores.micro);
      point["k"] = step.k;
      point["extra_train"] = step.extra_train;
      curve.push_back(point);
      report.folds.push_back(point);
      report.models.push_back(std::move(r));
    } catch (const std::exception& e) {
      report.failures.emplace_back(name, e.what());
    }
  }
  report.extra["curve"] = curve;
  return report;
}

EvalReport run_ablation(const Corpus& full, const ProtocolConfig& config) {
  const Corpus corpus = language_subset(full, config.language);
  const CorpusSplit split = make_global_split(corpus, config.split_seed);
  const auto train = select(corpus, split.train);
  const auto val = select(corpus, split.val);
  const auto test = select(corpus, split.test);

  BoundaryModelHandle qa =
      train_boundary(qa_instances(train, config.language), qa_instances(val, config.language),
                     config.language, config.boundary, default_prompts(config.language));
  double t = steady_seconds();
  NerModelHandle ner_region = train_ner(train, val, corpus.labels(), config.ner);
  const double region_seconds = seconds_since(t);
  t = steady_seconds();
  NerModelHandle ner_full =
      train_ner(train, val, corpus.labels(), config.ner, RegionMode::kFullDocument);
  const double full_seconds = seconds_since(t);

  AblationReport ab = run_ablation_no_mbd(test, qa, ner_region, ner_full, config.pipeline);
  ab.pipeline_train_seconds = region_seconds;
  ab.full_document_train_seconds = full_seconds;

  EvalReport report;
  report.protocol = "ablation";
  ModelReport pipe;
  pipe.name = "pipeline";
  pipe.scores = ab.pipeline;
  pipe.errors = ab.pipeline_errors;
  ModelReport fulldoc;
  fulldoc.name = "full_document";
  fulldoc.scores = ab.full_document;
  fulldoc.errors = ab.full_document_errors;
  report.models.push_back(pipe);
  report.models.push_back(fulldoc);
  report.extra = ab.to_json();
  report.extra["split"] = split.to_json();
  return report;
}

}  // namespace miner
