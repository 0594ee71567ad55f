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


// One PASS/FAIL/SKIP line per acceptance criterion. Criteria 9-13 need the
// annotated public corpus; point MINER_CITILINK_CORPUS at its JSONL file.

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <thread>

#include "miner/boundary.h"
#include "miner/crf.h"
#include "miner/deslex.h"
#include "miner/errors.h"
#include "miner/llm_baseline.h"
#include "miner/mer.h"
#include "miner/meter.h"
#include "miner/metrics.h"
#include "miner/protocols.h"
#include "miner/splits.h"
#include "miner/synth.h"
#include "miner/text.h"

namespace miner {
namespace {

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kFail;
  std::string detail;
};

Outcome check(bool ok, std::string detail) {
  return {ok ? Status::kPass : Status::kFail, std::move(detail)};
}

const Corpus& synthetic() {
  static const Corpus c = generate_synthetic_corpus();
  return c;
}

std::vector<AnnotatedMinute> select(const Corpus& c, const std::vector<std::string>& ids) {
  std::vector<AnnotatedMinute> out;
  for (const auto& id : ids) out.push_back(c.at(id));
  return out;
}

// 1. Metric oracles.

std::vector<std::string> oracle_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Token-overlap precision and recall by multiset intersection.
std::pair<double, double> oracle_token_pr(const std::string& pred, const std::string& gold) {
  auto p = oracle_tokens(pred), g = oracle_tokens(gold);
  std::map<std::string, int> count;
  for (const auto& t : g) ++count[t];
  int common = 0;
  for (const auto& t : p) {
    if (count[t] > 0) {
      --count[t];
      ++common;
    }
  }
  if (p.empty() || g.empty()) return {0.0, 0.0};
  return {static_cast<double>(common) / p.size(), static_cast<double>(common) / g.size()};
}

Outcome criterion_metric_oracles() {
  std::mt19937_64 rng(101);
  const std::vector<std::string> vocab = {"on", "12", "march", "2020", "ata", "sala", "nobre",
                                          "reunião", "câmara", "ordinária"};
  const std::vector<Kind> kinds = {Kind::kDate, Kind::kLocation, Kind::kPresident,
                                   Kind::kStartTime};
  int instances = 0, mismatches = 0;
  double max_f1_gap = 0.0;
  for (int trial = 0; trial < 200; ++trial, ++instances) {
    std::string pred, gold;
    for (size_t i = 0, n = 1 + rng() % 15; i < n; ++i) pred += vocab[rng() % vocab.size()] + " ";
    for (size_t i = 0, n = 1 + rng() % 15; i < n; ++i) gold += vocab[rng() % vocab.size()] + " ";
    if (rng() % 4 == 0) gold = pred;
    auto [p, r] = oracle_token_pr(pred, gold);
    double f1 = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
    max_f1_gap = std::max(max_f1_gap, std::abs(squad_f1(pred, gold) - f1));
    int em = oracle_tokens(pred) == oracle_tokens(gold);
    mismatches += squad_em(pred, gold) != em;

    // Entities over a 30-token line; set semantics on (category, span).
    auto random_set = [&](size_t n) {
      std::set<std::pair<int, std::pair<size_t, size_t>>> keys;
      std::vector<EntityAnnotation> out;
      for (size_t i = 0; i < n; ++i) {
        size_t b = rng() % 28, len = 1 + rng() % 3;
        int k = rng() % kinds.size();
        if (!keys.insert({k, {b, b + len}}).second) continue;
        out.push_back({make_category(kinds[k]), {b, b + len}, ""});
      }
      return out;
    };
    auto g = random_set(rng() % 21), q = random_set(rng() % 21);
    if (rng() % 2) q.insert(q.end(), g.begin(), g.begin() + g.size() / 2);
    std::set<std::pair<std::string, Span>> gs, qs;
    std::vector<EntityAnnotation> unique_q;
    for (const auto& e : g) gs.insert({e.category.label(), e.span});
    for (const auto& e : q) {
      if (qs.insert({e.category.label(), e.span}).second) unique_q.push_back(e);
    }
    long tp = 0;
    for (const auto& x : qs) tp += gs.count(x);
    EntityScores s = entity_prf(unique_q, g, 64);
    long fp = static_cast<long>(qs.size()) - tp, fn = static_cast<long>(gs.size()) - tp;
    mismatches += s.micro.tp != tp || s.micro.fp != fp || s.micro.fn != fn;
  }
  auto [hp, hr] = oracle_token_pr("on 12 March", "12 March 2020");
  double hf = squad_f1("on 12 March", "12 March 2020");
  bool hand = std::abs(hp - 2.0 / 3) < 1e-12 && std::abs(hr - 2.0 / 3) < 1e-12 &&
              std::abs(hf - 2.0 / 3) < 1e-12;
  return check(mismatches == 0 && max_f1_gap <= 1e-12 && hand,
               fmt::format("{} instances, {} mismatches, max |dF1| {:.1e} (tol 1e-12), "
                           "hand case P={:.4f} R={:.4f} F1={:.4f}",
                           instances, mismatches, max_f1_gap, hp, hr, hf));
}

// 2. Viterbi against exhaustive enumeration.

Outcome criterion_viterbi() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int bad = 0, trials = 1000;
  for (int t = 0; t < trials; ++t) {
    int n = 1 + rng() % 6, tags = 1 + rng() % 5;
    Emissions e(n, std::vector<double>(tags));
    for (auto& row : e)
      for (auto& x : row) x = u(rng);
    CrfParameters c = CrfParameters::zeros(tags);
    for (auto& x : c.transition) x = u(rng);
    for (auto& x : c.start) x = u(rng);
    for (auto& x : c.end) x = u(rng);
    double best = kNegInf;
    std::vector<int> path(n, 0);
    while (true) {
      best = std::max(best, path_score(e, c, path));
      int i = n - 1;
      while (i >= 0 && ++path[i] == tags) path[i--] = 0;
      if (i < 0) break;
    }
    bad += path_score(e, c, viterbi_decode(e, c)) != best;
  }
  return check(bad == 0, fmt::format("{} random matrices (n<=6, |T|<=5), {} score mismatches "
                                     "(exact equality)",
                                     trials, bad));
}

// 3. BIO round trip and repair idempotence.

Outcome criterion_bio() {
  std::mt19937_64 rng(303);
  const LabelInventory labels;
  const std::vector<std::string> words = {"Ana", "Silva", "sala", "nobre", "de", "março", "12h30",
                                          "ata", "n.º", "Câmara"};
  int layout_failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::string text;
    for (size_t i = 0, n = 1 + rng() % 30; i < n; ++i) {
      if (i) text += ' ';
      text += words[rng() % words.size()];
    }
    auto tokens = tokenize_words(text);
    const size_t n = tokens.size();
    std::vector<EntityAnnotation> gold;
    for (size_t i = 0; i < n;) {
      if (rng() % 3 == 0) {
        size_t len = 1 + rng() % std::min<size_t>(3, n - i);
        Span s{tokens[i].begin, tokens[i + len - 1].end};
        gold.push_back({labels.category(rng() % labels.size()), s, std::string(slice(text, s))});
        i += len + (rng() % 2);  // adjacent entities allowed
      } else {
        ++i;
      }
    }
    TagSequence seq = to_bio(text, tokens, gold, labels, true);
    auto back = to_annotations(decode_entities(text, seq, labels));
    layout_failures += back != gold;
  }
  int repair_failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> tags(rng() % 30);
    for (auto& t : tags) t = rng() % labels.num_tags();
    auto once = repair_bio(tags);
    repair_failures += !is_valid_bio(once) || repair_bio(once) != once;
  }
  return check(layout_failures == 0 && repair_failures == 0,
               fmt::format("1000 layouts: {} round-trip failures; 1000 corrupted sequences: {} "
                           "repair failures",
                           layout_failures, repair_failures));
}

// 4. Deslexicalization rates, placeholdering, alignment, determinism.

Outcome criterion_deslex() {
  set_warnings_enabled(false);
  const auto& minutes = synthetic().minutes();
  long nl_c = 0, nl_r = 0, dt_c = 0, dt_p = 0;
  int leaks = 0, misaligned = 0, nondeterministic = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const AnnotatedMinute& m = minutes[t % minutes.size()];
    DeslexPolicy p = DeslexPolicy::from_json(nlohmann::json::object());
    p.seed = 1000 + t;
    DeslexTrace trace;
    AnnotatedMinute d = deslexicalize(m, p, &trace);
    nl_c += trace.name_loc_candidates;
    nl_r += trace.name_loc_replaced;
    dt_c += trace.datetime_candidates;
    dt_p += trace.datetime_perturbed;
    // Every mention is replaced; minutes that never name the municipality
    // have nothing to replace.
    const bool named = m.doc.text.find(m.doc.municipality) != std::string::npos;
    leaks += d.doc.text.find(m.doc.municipality) != std::string::npos ||
             (named && d.doc.text.find(p.municipality_placeholder) == std::string::npos);
    for (const auto& e : d.entities) misaligned += slice(d.doc.text, e.span) != e.surface;
    if (t < 300) nondeterministic += serialize_minute(deslexicalize(m, p)) != serialize_minute(d);
  }
  set_warnings_enabled(true);
  double nl = static_cast<double>(nl_r) / nl_c, dt = static_cast<double>(dt_p) / dt_c;
  bool ok = std::abs(nl - 0.60) <= 0.02 && std::abs(dt - 0.30) <= 0.02 && leaks == 0 &&
            misaligned == 0 && nondeterministic == 0;
  return check(ok, fmt::format("{} trials: names/locations {:.4f} (0.60+-0.02), dates/times "
                               "{:.4f} (0.30+-0.02), {} placeholder misses, {} misaligned spans, "
                               "{} nondeterministic reruns",
                               trials, nl, dt, leaks, misaligned, nondeterministic));
}

// 5. Chunking and region offset remapping.

Outcome criterion_chunking() {
  std::mt19937_64 rng(505);
  int bad_step = 0, uncontained = 0, bad_remap = 0;
  size_t longest = 0;
  for (const auto& m : synthetic().minutes()) {
    for (SegmentType t : {SegmentType::kOpening, SegmentType::kClosing}) {
      if (auto s = m.segment(t)) longest = std::max(longest, tokenize_words(slice(m.doc.text, *s)).size());
    }
  }
  // Containment is guaranteed for answers of at most stride + 1 tokens.
  const size_t max_answer = 129;
  for (int trial = 0; trial < 1000; ++trial) {
    size_t n = 1 + rng() % 4000;
    size_t len = 1 + rng() % std::min(n, max_answer);
    size_t first = rng() % (n - len + 1), last = first + len - 1;
    auto w = chunk_with_stride(n, 512, 128);
    for (size_t i = 0; i + 1 < w.size(); ++i) {
      bad_step += w[i + 1].begin - w[i].begin != 384 && w[i + 1].end != n;
    }
    bad_step += w.back().end != n;
    uncontained += std::none_of(w.begin(), w.end(),
                                [&](const TokenWindow& x) { return x.contains(first, last); });
  }
  for (const auto& m : synthetic().minutes()) {
    ReducedRegion r = gold_region(m);
    for (const auto& piece : r.offset_map) {
      for (size_t x = piece.region.begin; x <= piece.region.end; ++x) {
        auto src = r.to_source(x);
        bad_remap += !src || r.to_region(*src) != x;
      }
    }
    for (const auto& e : annotations_in_region(m, r)) {
      auto src = r.span_to_source(e.span);
      bad_remap += !src || slice(m.doc.text, *src) != e.surface;
    }
  }
  return check(bad_step == 0 && uncontained == 0 && bad_remap == 0 && longest <= max_answer,
               fmt::format("1000 placements (answers <= {} tokens; longest synthetic segment {}): "
                           "{} bad steps, {} uncontained, {} remap errors",
                           max_answer, longest, bad_step, uncontained, bad_remap));
}

// 6. Resource meter arithmetic and additivity.

Outcome criterion_meter() {
  MeterConfig c;
  c.average_watts = 100.0;
  c.carbon_intensity = 0.5;
  c.use_counters = false;
  ResourceMeter m(c);
  ResourceReport r = m.report_for(3600.0);
  bool exact = r.energy_kwh == 0.1 && r.kg_co2e == 0.05;
  auto work = [] { std::this_thread::sleep_for(std::chrono::milliseconds(150)); };
  ResourceReport parts;
  for (int i = 0; i < 3; ++i) parts += m.measure(work);
  ResourceReport whole = m.measure([&] {
    for (int i = 0; i < 3; ++i) work();
  });
  double rel = std::abs(parts.energy_kwh - whole.energy_kwh) / whole.energy_kwh;
  return check(exact && rel <= 0.02,
               fmt::format("3600 s at 100 W, 0.5 kg/kWh -> {} kWh, {} kg CO2e; parts vs whole "
                           "energy differ by {:.3f}% (tol 2%)",
                           r.energy_kwh, r.kg_co2e, 100 * rel));
}

// 7. Synthetic end-to-end smoke run.

Outcome criterion_synthetic_e2e() {
  set_warnings_enabled(false);
  const double start = steady_seconds();
  ProtocolConfig config;
  EvalReport report = run_global_eval(synthetic(), config);
  const double seconds = steady_seconds() - start;
  set_warnings_enabled(true);
  const ModelReport* mbd = nullptr;
  for (const auto& q : report.qa_models) {
    if (q.name == "mbd") mbd = &q;
  }
  const ModelReport* pipe = report.model("pipeline");
  const ModelReport* mer = report.model("mer");
  if (!mbd || !mbd->qa || !pipe || !mer) return check(false, "missing models in report");
  double em = mbd->qa->em, f1 = pipe->scores.micro.f1();
  double reduction = pipe->extra.value("token_reduction", 0.0);
  return check(em >= 0.8 && f1 >= 0.9 && mer->scores.micro.f1() >= 0.9 && reduction >= 0.9 &&
                   seconds <= 1800,
               fmt::format("30 minutes (6x5): boundary EM {:.3f} (>=0.8), pipeline micro-F1 "
                           "{:.3f} (>=0.9), gold-region micro-F1 {:.3f} (>=0.9), token "
                           "reduction {:.3f} (>=0.9), {:.1f} s (<=1800)",
                           em, f1, mer->scores.micro.f1(), reduction, seconds));
}

// 8. LLM baseline against planted mock answers.

bool boundary_at(std::string_view text, size_t pos, size_t len) {
  auto word = [](unsigned char c) { return std::isalnum(c) || c >= 0x80; };
  bool left = pos == 0 || !word(text[pos - 1]);
  bool right = pos + len >= text.size() || !word(text[pos + len]);
  return left && right;
}

// First exact occurrence on word boundaries, else the first exact one.
std::optional<Span> oracle_align(std::string_view text, const std::string& value) {
  std::optional<Span> any;
  for (size_t pos = text.find(value); pos != std::string_view::npos;
       pos = text.find(value, pos + 1)) {
    if (boundary_at(text, pos, value.size())) return Span{pos, pos + value.size()};
    if (!any) any = Span{pos, pos + value.size()};
  }
  return any;
}

Outcome criterion_llm_offline() {
  std::mt19937_64 rng(808);
  const Corpus& corpus = synthetic();
  CorpusSplit split = make_global_split(corpus, 42);
  // Planted answers for every held-out (validation and test) minute.
  auto test = select(corpus, split.test);
  for (auto& m : select(corpus, split.val)) test.push_back(std::move(m));
  auto train = select(corpus, split.train);
  std::map<std::string, std::string> responses;
  long tp = 0, fp = 0, fn = 0;
  int planted_garbage = 0;
  std::string garbage_id;
  for (size_t i = 0; i < test.size(); ++i) {
    const AnnotatedMinute& m = test[i];
    nlohmann::ordered_json answer = answer_json(m.entities);
    if (i == 0) {
      responses[m.doc.doc_id] = "Lamento, não consigo responder a isso.";
      garbage_id = m.doc.doc_id;
      ++planted_garbage;
      fn += m.entities.size();
      continue;
    }
    // Drop one singleton, fabricate a location, swap one presence.
    answer["date"] = nullptr;
    answer["location"] = "Pavilhão Zebedeu Quixote Wolfgang";
    if (!answer["councilors"].empty()) {
      auto& c = answer["councilors"][rng() % answer["councilors"].size()];
      c["presence"] = c["presence"] == "absent" ? "present" : "absent";
    }
    std::set<std::pair<std::string, Span>> pred, gold;
    for (const auto& v : values_from_answer(nlohmann::json::parse(answer.dump()))) {
      if (auto s = oracle_align(m.doc.text, v.value)) {
        pred.insert({v.category.label(), *s});
      } else {
        ++fp;  // unaligned values are false positives
      }
    }
    for (const auto& e : m.entities) gold.insert({e.category.label(), e.span});
    for (const auto& p : pred) tp += gold.count(p);
    fp += static_cast<long>(pred.size()) - std::count_if(pred.begin(), pred.end(), [&](auto& p) {
            return gold.count(p) > 0;
          });
    fn += static_cast<long>(gold.size()) - std::count_if(gold.begin(), gold.end(), [&](auto& g) {
            return pred.count(g) > 0;
          });
    std::string raw = answer.dump();
    if (i % 3 == 1) {
      raw = "```json\n" + answer.dump(2) + "\n```";
    } else if (i % 3 == 2) {
      std::replace(raw.begin(), raw.end(), '"', '\'');
      raw = "Resposta: " + raw.substr(0, raw.size() - 1) + ",}";
    }
    responses[m.doc.doc_id] = raw;
  }
  std::vector<const AnnotatedMinute*> shots = {&train[0], &train[1]};
  ExtractionPromptSpec spec = ExtractionPromptSpec::make_default(Language::kPt, shots, {});
  set_warnings_enabled(false);
  MockEndpoint mock(responses);
  LlmBenchmark b = llm_benchmark(test, spec, mock, nullptr);
  MockEndpoint replay(responses);
  LlmResult garbage = llm_extract(corpus.at(garbage_id).doc, spec, replay, nullptr);
  set_warnings_enabled(true);
  bool empty_record = !garbage.parse.ok && garbage.entities.empty() &&
                      garbage.record.councilors.empty() && !garbage.record.date &&
                      !garbage.record.president;
  bool ok = b.llm.micro.tp == tp && b.llm.micro.fp == fp && b.llm.micro.fn == fn &&
            b.parse_failures == planted_garbage && empty_record;
  return check(ok, fmt::format("{} docs: benchmark tp/fp/fn {}/{}/{} vs oracle {}/{}/{}; parse "
                               "failures {} (planted {}); garbage -> empty record: {}",
                               test.size(), b.llm.micro.tp, b.llm.micro.fp, b.llm.micro.fn, tp,
                               fp, fn, b.parse_failures, planted_garbage,
                               empty_record ? "yes" : "no"));
}

// 9-13. Full reproduction on the public corpus.

bool within(double x, double target, double tol) { return std::abs(x - target) <= tol; }

struct FullRun {
  Corpus corpus;
  std::optional<EvalReport> global;
};

Outcome criterion_stage1(FullRun& run) {
  if (!run.global) run.global = run_global_eval(run.corpus, ProtocolConfig{});
  std::map<std::string, QaScores> qa;
  for (const auto& m : run.global->qa_models) {
    if (m.qa) qa[m.name] = *m.qa;
  }
  if (!qa.count("mbd")) return check(false, "no boundary scores");
  double bm25 = qa.count("bm25") ? qa["bm25"].f1 : 1.0;
  double dense = qa.count("dense") ? qa["dense"].f1 : 1.0;
  return check(within(qa["mbd"].f1, 0.826, 0.05) && within(qa["mbd"].em, 0.792, 0.05) &&
                   bm25 < 0.12 && dense < 0.12,
               fmt::format("pt token-F1 {:.3f} (0.826+-0.05), EM {:.3f} (0.792+-0.05), BM25 "
                           "F1 {:.3f} (<0.12), dense F1 {:.3f} (<0.12)",
                           qa["mbd"].f1, qa["mbd"].em, bm25, dense));
}

Outcome criterion_stage2(FullRun& run) {
  ProtocolConfig config;
  config.deslex = DeslexPolicy::from_json(nlohmann::json::object());
  config.baselines = false;
  EvalReport r = run_global_eval(run.corpus, config);
  const ModelReport* base = r.model("mer");
  const ModelReport* dl = r.model("mer_deslex");
  if (!base || !dl) return check(false, "missing entity models");
  double f = base->scores.micro.f1(), fd = dl->scores.micro.f1();
  return check(within(f, 0.96, 0.02) && std::abs(f - fd) <= 0.01,
               fmt::format("pt micro-F1 {:.3f} (0.96+-0.02), deslex {:.3f} (within 0.01)", f, fd));
}

Outcome criterion_loo(FullRun& run) {
  std::string detail;
  bool ok = true;
  for (auto [lang, target] : {std::pair{Language::kPt, 0.80}, std::pair{Language::kEn, 0.72}}) {
    ProtocolConfig config;
    config.language = lang;
    try {
      EvalReport r = run_leave_one_out(run.corpus, config);
      double f = r.model("mer") ? r.model("mer")->scores.micro.f1() : 0.0;
      ok &= within(f, target, 0.05);
      detail += fmt::format("{} micro-F1 {:.3f} ({:.2f}+-0.05); ", language_code(lang), f, target);
    } catch (const std::exception& e) {
      ok = false;
      detail += fmt::format("{}: {}; ", language_code(lang), e.what());
    }
  }
  return check(ok, detail);
}

Outcome criterion_incremental(FullRun& run) {
  ProtocolConfig config;
  config.k_max = 3;
  int gains = 0, reached = 0, total = 0;
  std::string detail;
  for (const auto& muni : run.corpus.municipalities()) {
    EvalReport r = run_incremental(run.corpus, muni, config);
    auto f = [&](int k) {
      const ModelReport* m = r.model(fmt::format("k={}", k));
      return m ? m->scores.micro.f1() : 0.0;
    };
    ++total;
    gains += f(1) - f(0) >= 0.05;
    reached += f(3) >= 0.90;
    detail += fmt::format("{} {:.3f}->{:.3f}->{:.3f}; ", muni, f(0), f(1), f(3));
  }
  return check(total > 0 && gains == total && reached >= std::min(5, total),
               fmt::format("k=1 gain >=0.05 in {}/{}, k=3 >=0.90 in {}/{} (need 5); {}", gains,
                           total, reached, total, detail));
}

Outcome criterion_ablation(FullRun& run) {
  EvalReport r = run_ablation(run.corpus, ProtocolConfig{});
  const ModelReport* p = r.model("pipeline");
  const ModelReport* f = r.model("full_document");
  if (!p || !f) return check(false, "missing ablation models");
  double d = p->scores.micro.f1() - f->scores.micro.f1();
  return check(d >= 0.0 && d <= 0.05,
               fmt::format("pipeline {:.3f} - full document {:.3f} = {:.3f} (in [0, 0.05])",
                           p->scores.micro.f1(), f->scores.micro.f1(), d));
}

int run() {
  struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> fn;
  };
  std::vector<Criterion> always = {
      {1, "metric oracles", criterion_metric_oracles},
      {2, "viterbi exhaustive", criterion_viterbi},
      {3, "bio round trip", criterion_bio},
      {4, "deslexicalization", criterion_deslex},
      {5, "chunking", criterion_chunking},
      {6, "resource meter", criterion_meter},
      {7, "synthetic end-to-end", criterion_synthetic_e2e},
      {8, "llm baseline offline", criterion_llm_offline},
  };
  int failures = 0;
  auto print = [&](int id, const std::string& name, const Outcome& o) {
    const char* tag = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL"
                                                                                      : "SKIP";
    failures += o.status == Status::kFail;
    fmt::print("[{}] {:>2} {}: {}\n", tag, id, name, o.detail);
    std::fflush(stdout);
  };
  for (const auto& c : always) {
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {Status::kFail, std::string("exception: ") + e.what()};
    }
    print(c.id, c.name, o);
  }

  const char* path = std::getenv("MINER_CITILINK_CORPUS");
  std::vector<std::pair<std::string, std::function<Outcome(FullRun&)>>> full = {
      {"stage 1 boundary qa", criterion_stage1},
      {"stage 2 global split", criterion_stage2},
      {"leave-one-out", criterion_loo},
      {"incremental", criterion_incremental},
      {"ablation", criterion_ablation},
  };
  std::optional<FullRun> run;
  std::string load_error;
  if (path && *path) {
    try {
      run = FullRun{load_corpus(path), std::nullopt};
    } catch (const std::exception& e) {
      load_error = e.what();
    }
  }
  for (size_t i = 0; i < full.size(); ++i) {
    Outcome o;
    if (!path || !*path) {
      o = {Status::kSkip, "set MINER_CITILINK_CORPUS to the annotated corpus JSONL"};
    } else if (!run) {
      o = {Status::kFail, "cannot load corpus: " + load_error};
    } else {
      try {
        o = full[i].second(*run);
      } catch (const std::exception& e) {
        o = {Status::kFail, std::string("exception: ") + e.what()};
      }
    }
    print(9 + static_cast<int>(i), full[i].first, o);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace miner

int main() { return miner::run(); }
