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

// Command-line entry point. Exit codes: 0 success, 1 runtime failure,
// 2 configuration or validation failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmt/format.h"
#include "json.hpp"
#include "miner/boundary.h"
#include "miner/corpus.h"
#include "miner/deslex.h"
#include "miner/errors.h"
#include "miner/hash.h"
#include "miner/llm_baseline.h"
#include "miner/mer.h"
#include "miner/meter.h"
#include "miner/pipeline.h"
#include "miner/protocols.h"
#include "miner/recipe.h"
#include "miner/splits.h"
#include "miner/synth.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace miner {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

// Raised for anything the user can fix in the recipe or on the command line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::string recipe;
  std::string out;
  std::string qa_model;
  std::string ner_model;
  std::optional<double> null_threshold;
  std::string meter = "auto";  // auto, on, off
  std::string endpoint;
};

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
  }
  fs::rename(tmp, path);
}

void write_json(const fs::path& path, const ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

Recipe load_recipe(const Overrides& o) {
  if (o.recipe.empty()) throw UsageError("--recipe is required");
  Recipe r = Recipe::load(o.recipe);
  if (!o.out.empty()) r.output_dir = fs::absolute(o.out);
  if (!o.qa_model.empty()) r.qa_model = fs::absolute(o.qa_model);
  if (!o.ner_model.empty()) r.ner_model = fs::absolute(o.ner_model);
  if (o.null_threshold) r.pipeline.null_threshold = *o.null_threshold;
  if (!o.endpoint.empty()) {
    if (o.endpoint != "mock" && o.endpoint != "http") {
      throw UsageError("--endpoint must be 'mock' or 'http'");
    }
    r.llm.endpoint.kind = o.endpoint;
  }
  // The effective configuration always sits next to the outputs.
  write_json(r.output_dir / "effective_recipe.json", r.to_json());
  return r;
}

Corpus load_recipe_corpus(const Recipe& r) {
  if (!fs::exists(r.corpus)) throw UsageError("corpus not found: " + r.corpus.string());
  return load_corpus(r.corpus);
}

std::unique_ptr<ResourceMeter> make_meter(const Recipe& r, const std::string& mode) {
  if (mode == "off") return nullptr;
  if (mode != "auto" && mode != "on") throw UsageError("--meter must be auto, on or off");
  if (!r.meter) {
    if (mode == "on") throw UsageError("--meter on needs a 'meter' section with carbon_intensity");
    return nullptr;
  }
  return std::make_unique<ResourceMeter>(*r.meter);
}

std::vector<AnnotatedMinute> select(const Corpus& c, const std::vector<std::string>& ids) {
  std::vector<AnnotatedMinute> out;
  for (const auto& id : ids) out.push_back(c.at(id));
  return out;
}

// Global split restricted to the recipe language.
struct Partition {
  Corpus corpus;
  CorpusSplit split;
  std::vector<AnnotatedMinute> train, val, test;
};

Partition partition(const Corpus& full, const Recipe& r) {
  std::vector<std::string> ids;
  for (const auto& m : full.minutes()) {
    if (m.doc.language == r.language) ids.push_back(m.doc.doc_id);
  }
  if (ids.empty()) throw UsageError("corpus has no minutes in the recipe language");
  Partition p;
  p.corpus = full.subset(ids);
  p.split = make_global_split(p.corpus, r.split_seed);
  p.train = select(p.corpus, p.split.train);
  p.val = select(p.corpus, p.split.val);
  p.test = select(p.corpus, p.split.test);
  return p;
}

std::vector<QaInstance> qa_of(const std::vector<AnnotatedMinute>& minutes,
                              const std::map<SegmentType, BoundaryPrompt>& prompts) {
  std::vector<QaInstance> out;
  for (const auto& m : minutes) {
    for (SegmentType t : {SegmentType::kOpening, SegmentType::kClosing}) {
      out.push_back(to_squad_v2(m, {t, m.segment(t)}, prompts.at(t)));
    }
  }
  return out;
}

std::map<SegmentType, BoundaryPrompt> prompts_for(Language lang) {
  return {{SegmentType::kOpening, default_prompt(SegmentType::kOpening, lang)},
          {SegmentType::kClosing, default_prompt(SegmentType::kClosing, lang)}};
}

int cmd_prepare(const Overrides& o) {
  Recipe r = load_recipe(o);
  Corpus corpus = load_recipe_corpus(r);
  Partition p = partition(corpus, r);
  const fs::path dir = r.output_dir / "prepared";
  auto prompts = prompts_for(r.language);
  ordered_json files = ordered_json::object();
  auto emit = [&](const std::string& name, const std::string& content) {
    write_text(dir / name, content);
    files[name] = sha256_hex(content);
  };
  size_t qa_count = 0;
  for (const auto& [part, minutes] :
       {std::pair{"train", &p.train}, std::pair{"val", &p.val}, std::pair{"test", &p.test}}) {
    auto qa = qa_of(*minutes, prompts);
    qa_count += qa.size();
    emit(fmt::format("qa_{}.json", part), squad_v2_json(qa).dump(1) + "\n");
    std::string conll;
    for (const auto& m : *minutes) {
      ReducedRegion region = gold_region(m);
      if (region.empty_flag) continue;
      auto tokens = tokenize_words(region.text);
      conll += to_conll(region.text,
                        to_bio(region.text, tokens, annotations_in_region(m, region),
                               p.corpus.labels()),
                        p.corpus.labels());
    }
    emit(fmt::format("bio_{}.conll", part), conll);
  }
  emit("split_global.json", p.split.to_json().dump(2) + "\n");
  ordered_json loo = ordered_json::array();
  for (const auto& s : make_leave_one_out(p.corpus, r.split_seed)) loo.push_back(s.to_json());
  emit("split_loo.json", loo.dump(2) + "\n");

  ordered_json manifest;
  manifest["recipe_hash"] = r.hash();
  manifest["documents"] = p.corpus.size();
  manifest["qa_instances"] = qa_count;
  manifest["labels"] = p.corpus.labels().label_names();
  manifest["files"] = files;
  write_json(dir / "manifest.json", manifest);
  std::cout << fmt::format("prepared {} documents, {} QA instances -> {}\n", p.corpus.size(),
                           qa_count, dir.string());
  return kExitOk;
}

int cmd_deslex(const Overrides& o, std::optional<uint64_t> seed) {
  Recipe r = load_recipe(o);
  Corpus corpus = load_recipe_corpus(r);
  DeslexPolicy policy = r.deslex.value_or(DeslexPolicy{});
  if (!r.deslex) policy = DeslexPolicy::from_json(nlohmann::json::object());
  if (seed) policy.seed = *seed;
  policy.validate(r.language);
  Partition p = partition(corpus, r);
  // Only training documents are ever deslexicalized.
  Corpus out = deslexicalize_corpus(p.corpus.subset(p.split.train), policy);
  const fs::path path = r.output_dir / "deslex" / "train.jsonl";
  fs::create_directories(path.parent_path());
  save_corpus(out, path);
  write_json(r.output_dir / "deslex" / "policy.json", policy.to_json());
  std::cout << fmt::format("deslexicalized {} training documents -> {}\n", out.size(),
                           path.string());
  return kExitOk;
}

int cmd_train(const Overrides& o, const std::string& stage) {
  Recipe r = load_recipe(o);
  if (stage != "mbd" && stage != "mer") throw UsageError("--stage must be 'mbd' or 'mer'");
  Corpus corpus = load_recipe_corpus(r);
  Partition p = partition(corpus, r);
  if (stage == "mbd") {
    auto prompts = prompts_for(r.language);
    BoundaryModelHandle h =
        train_boundary(qa_of(p.train, prompts), qa_of(p.val, prompts), r.language, r.boundary,
                       prompts);
    h.metrics["recipe_hash"] = r.hash();
    save_boundary(h, r.qa_model);
    std::cout << fmt::format("boundary model -> {}\n{}\n", r.qa_model.string(),
                             h.metrics.dump(2));
  } else {
    NerModelHandle h = train_ner(p.train, p.val, p.corpus.labels(), r.ner, RegionMode::kSegments,
                                 r.deslex);
    h.metrics["recipe_hash"] = r.hash();
    save_ner(h, r.ner_model);
    ordered_json summary = h.metrics;
    summary.erase("history");
    std::cout << fmt::format("entity model -> {}\n{}\n", r.ner_model.string(), summary.dump(2));
  }
  return kExitOk;
}

std::vector<MinuteDocument> load_inputs(const fs::path& input, Language lang) {
  std::vector<MinuteDocument> docs;
  if (!fs::exists(input)) throw UsageError("input not found: " + input.string());
  if (fs::is_regular_file(input)) {
    const Corpus corpus = load_corpus(input);
    for (const auto& m : corpus.minutes()) docs.push_back(m.doc);
    return docs;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(input)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".txt" || ext == ".jsonl")) {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    if (f.extension() == ".jsonl") {
      const Corpus corpus = load_corpus(f);
      for (const auto& m : corpus.minutes()) docs.push_back(m.doc);
      continue;
    }
    std::ifstream in(f, std::ios::binary);
    MinuteDocument d;
    d.doc_id = f.stem().string();
    d.municipality = "unknown";
    d.language = lang;
    d.text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    d.sentences = sentence_split(d.text, lang);
    docs.push_back(std::move(d));
  }
  return docs;
}

int cmd_extract(const Overrides& o, const std::string& input) {
  Recipe r = load_recipe(o);
  if (input.empty()) throw UsageError("--input is required");
  std::vector<MinuteDocument> docs = load_inputs(input, r.language);
  if (docs.empty()) {
    std::cerr << "no documents\n";
    return kExitRuntime;
  }
  BoundaryModelHandle qa = load_boundary(r.qa_model);
  NerModelHandle ner = load_ner(r.ner_model);
  auto meter = make_meter(r, o.meter);
  BatchResult batch = batch_extract(docs, qa, ner, r.pipeline, meter.get());
  const fs::path dir = r.output_dir / "records";
  std::map<std::string, const MinuteDocument*> by_id;
  for (const auto& d : docs) by_id[d.doc_id] = &d;
  for (const auto& rec : batch.records) {
    ordered_json j = rec.to_json(by_id.at(rec.doc_id)->text);
    j["recipe_hash"] = r.hash();
    write_json(dir / (rec.doc_id + ".json"), j);
  }
  std::string sidecar;
  for (const auto& e : batch.errors) {
    sidecar += ordered_json{{"doc_id", e.doc_id}, {"error", e.message}}.dump() + "\n";
  }
  write_text(r.output_dir / "extract_errors.jsonl", sidecar);
  ordered_json resource;
  resource["recipe_hash"] = r.hash();
  resource["total"] = batch.total.to_json(meter != nullptr);
  resource["per_document"] = ordered_json::array();
  for (const auto& [id, rep] : batch.per_document) {
    ordered_json e{{"doc_id", id}};
    e.update(rep.to_json(meter != nullptr));
    resource["per_document"].push_back(e);
  }
  write_json(r.output_dir / "resource.json", resource);
  std::cout << fmt::format("{} records, {} errors -> {}\n", batch.records.size(),
                           batch.errors.size(), dir.string());
  return batch.records.empty() ? kExitRuntime : kExitOk;
}

void emit_report(const Recipe& r, const EvalReport& report, const std::string& name) {
  ordered_json j = report.to_json();
  j["recipe_hash"] = r.hash();
  write_json(r.output_dir / "eval" / (name + ".json"), j);
  const std::string table = report.to_table();
  write_text(r.output_dir / "eval" / (name + ".txt"), table);
  std::cout << table;
}

int run_llm(const Recipe& r, const Overrides& o) {
  Corpus corpus = load_recipe_corpus(r);
  Partition p = partition(corpus, r);
  std::vector<const AnnotatedMinute*> shots;
  for (size_t i = 0; i < p.train.size() && static_cast<int>(i) < r.llm.shots; ++i) {
    shots.push_back(&p.train[i]);
  }
  ExtractionPromptSpec spec = ExtractionPromptSpec::make_default(r.language, shots, r.llm.endpoint);
  auto endpoint = make_endpoint(r.llm.endpoint);
  auto meter = make_meter(r, o.meter);
  std::optional<BatchResult> pipeline;
  if (fs::exists(r.qa_model / "meta.json") && fs::exists(r.ner_model / "meta.json")) {
    BoundaryModelHandle qa = load_boundary(r.qa_model);
    NerModelHandle ner = load_ner(r.ner_model);
    std::vector<MinuteDocument> docs;
    for (const auto& m : p.test) docs.push_back(m.doc);
    pipeline = batch_extract(docs, qa, ner, r.pipeline, meter.get());
  } else {
    log_warning("no trained checkpoints; benchmarking the generative model alone");
  }
  LlmBenchmark bench = llm_benchmark(p.test, spec, *endpoint, meter.get(), r.llm.cache_dir,
                                     pipeline ? &*pipeline : nullptr);
  ordered_json j = bench.to_json();
  j["recipe_hash"] = r.hash();
  j["spec_hash"] = spec.hash();
  write_json(r.output_dir / "eval" / "llm.json", j);
  std::cout << fmt::format("llm    P {:.3f} R {:.3f} F1 {:.3f}  parse failures {}  unaligned {}\n",
                           bench.llm.micro.precision(), bench.llm.micro.recall(),
                           bench.llm.micro.f1(), bench.parse_failures, bench.unaligned);
  if (bench.pipeline) {
    std::cout << fmt::format("pipeline P {:.3f} R {:.3f} F1 {:.3f}\n",
                             bench.pipeline->micro.precision(), bench.pipeline->micro.recall(),
                             bench.pipeline->micro.f1());
  }
  return bench.failures.empty() ? kExitOk : kExitRuntime;
}

int cmd_eval(const Overrides& o, const std::string& protocol, const std::string& municipality) {
  Recipe r = load_recipe(o);
  if (protocol == "llm") return run_llm(r, o);
  Corpus corpus = load_recipe_corpus(r);
  ProtocolConfig config = r.protocol_config();
  if (protocol == "global") {
    auto meter = make_meter(r, o.meter);
    GlobalArtifacts artifacts;
    EvalReport report = run_global_eval(corpus, config, meter.get(), &artifacts);
    emit_report(r, report, "global");
    save_boundary(*artifacts.qa, r.qa_model);
    save_ner(*artifacts.ner, r.ner_model);
    return report.failures.empty() ? kExitOk : kExitRuntime;
  }
  if (protocol == "loo") {
    EvalReport report = run_leave_one_out(corpus, config);
    emit_report(r, report, "loo");
    return report.failures.empty() ? kExitOk : kExitRuntime;
  }
  if (protocol == "incremental") {
    std::vector<std::string> targets;
    if (!municipality.empty()) {
      targets.push_back(municipality);
    } else {
      for (const auto& m : corpus.municipalities()) targets.push_back(m);
    }
    int status = kExitOk;
    for (const auto& target : targets) {
      EvalReport report = run_incremental(corpus, target, config);
      std::string slug = target;
      std::replace_if(
          slug.begin(), slug.end(), [](char c) { return c == ' ' || c == '/'; }, '_');
      emit_report(r, report, "incremental_" + slug);
      if (!report.failures.empty()) status = kExitRuntime;
    }
    return status;
  }
  if (protocol == "ablation") {
    EvalReport report = run_ablation(corpus, config);
    emit_report(r, report, "ablation");
    return kExitOk;
  }
  throw UsageError("unknown protocol '" + protocol + "'");
}

int cmd_report(const std::string& input) {
  std::ifstream in(input);
  if (!in) throw UsageError("cannot read report '" + input + "'");
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.contains("protocol")) {
    std::cout << "protocol: " << j["protocol"].get<std::string>() << "\n";
    for (const auto& b : j.value("boundary", nlohmann::json::array())) {
      std::cout << fmt::format("{:<24} EM {:.3f} F1 {:.3f}\n", b["name"].get<std::string>(),
                               b["em"].get<double>(), b["f1"].get<double>());
    }
    for (const auto& m : j.value("models", nlohmann::json::array())) {
      const auto& micro = m["micro"];
      std::cout << fmt::format("{:<24} P {:.3f} R {:.3f} F1 {:.3f}\n", m["name"].get<std::string>(),
                               micro["precision"].get<double>(), micro["recall"].get<double>(),
                               micro["f1"].get<double>());
    }
    if (j.contains("resource")) std::cout << "resource: " << j["resource"].dump() << "\n";
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_synth(const std::string& out, const SynthConfig& config) {
  if (out.empty()) throw UsageError("--out is required");
  Corpus corpus = generate_synthetic_corpus(config);
  fs::path path = fs::absolute(out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_corpus(corpus, path);
  std::cout << fmt::format("{} synthetic minutes -> {}\n", corpus.size(), path.string());
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Metadata extraction from municipal meeting minutes"};
  app.require_subcommand(1);
  Overrides o;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--recipe", o.recipe, "Recipe file (JSON)")->required();
    cmd->add_option("--out", o.out, "Output directory (overrides the recipe)");
  };
  auto add_models = [&](CLI::App* cmd) {
    cmd->add_option("--qa-model", o.qa_model, "Boundary model checkpoint");
    cmd->add_option("--ner-model", o.ner_model, "Entity model checkpoint");
    cmd->add_option("--null-threshold", o.null_threshold, "Null-answer margin");
    cmd->add_option("--meter", o.meter, "Resource metering: auto, on or off");
  };

  auto* prepare = app.add_subcommand("prepare", "Materialize QA/BIO datasets and split manifests");
  add_common(prepare);

  std::optional<uint64_t> deslex_seed;
  auto* deslex = app.add_subcommand("deslex", "Deslexicalize the training documents");
  add_common(deslex);
  deslex->add_option("--seed", deslex_seed, "Policy seed");

  std::string stage;
  auto* train = app.add_subcommand("train", "Train a stage");
  add_common(train);
  add_models(train);
  train->add_option("--stage", stage, "mbd or mer")->required();

  std::string input;
  auto* extract = app.add_subcommand("extract", "Extract metadata records");
  add_common(extract);
  add_models(extract);
  extract->add_option("--input", input, "Directory of .txt/.jsonl files, or a JSONL corpus")
      ->required();

  std::string protocol, municipality;
  auto* eval = app.add_subcommand("eval", "Run an evaluation protocol");
  add_common(eval);
  add_models(eval);
  eval->add_option("--protocol", protocol, "global, loo, incremental, ablation or llm")
      ->required();
  eval->add_option("--municipality", municipality, "Target municipality (incremental)");
  eval->add_option("--endpoint", o.endpoint, "mock or http (llm)");

  auto* bench = app.add_subcommand("bench-llm", "Benchmark the generative baseline");
  add_common(bench);
  add_models(bench);
  bench->add_option("--endpoint", o.endpoint, "mock or http");

  std::string report_input;
  auto* report = app.add_subcommand("report", "Print a saved evaluation report");
  report->add_option("input", report_input, "Report JSON")->required();

  SynthConfig synth_config;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a templated synthetic corpus");
  synth->add_option("--out", synth_out, "Output JSONL")->required();
  synth->add_option("--municipalities", synth_config.municipalities);
  synth->add_option("--docs", synth_config.docs_per_municipality, "Documents per municipality");
  synth->add_option("--seed", synth_config.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*prepare) return cmd_prepare(o);
    if (*deslex) return cmd_deslex(o, deslex_seed);
    if (*train) return cmd_train(o, stage);
    if (*extract) return cmd_extract(o, input);
    if (*eval) return cmd_eval(o, protocol, municipality);
    if (*bench) return run_llm(load_recipe(o), o);
    if (*report) return cmd_report(report_input);
    if (*synth) return cmd_synth(synth_out, synth_config);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SchemaError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace
}  // namespace miner

int main(int argc, char** argv) { return miner::run(argc, argv); }
