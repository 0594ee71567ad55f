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

#include "miner/deslex.h"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/core.h>

#include "miner/errors.h"
#include "miner/hash.h"

namespace miner {

namespace {

const std::vector<std::string>& given_names(Language lang) {
  static const std::vector<std::string> pt = {
      "Ana", "Beatriz", "Carla", "Daniela", "Eduarda", "Filipa", "Gabriela",
      "Helena", "Inês", "Joana", "Leonor", "Mafalda", "Marta", "Patrícia",
      "Rita", "Sofia", "Teresa", "Vera", "Alberto", "Bruno", "Carlos",
      "Diogo", "Eduardo", "Fernando", "Gonçalo", "Hugo", "João", "Luís",
      "Manuel", "Nuno", "Paulo", "Ricardo", "Rui", "Sérgio", "Tiago", "Vítor"};
  static const std::vector<std::string> en = {
      "Alice", "Bethany", "Claire", "Diana", "Emily", "Fiona", "Grace",
      "Hannah", "Isabel", "Julia", "Laura", "Megan", "Olivia", "Rachel",
      "Sarah", "Adam", "Brian", "Colin", "David", "Edward", "Frank",
      "George", "Henry", "James", "Kevin", "Martin", "Oliver", "Peter",
      "Richard", "Simon", "Thomas", "William"};
  return lang == Language::kPt ? pt : en;
}

const std::vector<std::string>& surnames(Language lang) {
  static const std::vector<std::string> pt = {
      "Almeida", "Antunes", "Barbosa", "Cardoso", "Carvalho", "Correia",
      "Costa", "Cunha", "Dias", "Esteves", "Faria", "Ferreira", "Fonseca",
      "Gomes", "Gonçalves", "Lopes", "Macedo", "Machado", "Marques",
      "Martins", "Mendes", "Monteiro", "Moreira", "Nogueira", "Nunes",
      "Oliveira", "Pereira", "Pinto", "Ramos", "Reis", "Ribeiro", "Rocha",
      "Rodrigues", "Santos", "Sousa", "Tavares", "Teixeira", "Vieira"};
  static const std::vector<std::string> en = {
      "Adams", "Baker", "Bennett", "Brooks", "Carter", "Clarke", "Collins",
      "Cooper", "Davies", "Edwards", "Evans", "Fisher", "Foster", "Green",
      "Hall", "Harris", "Hughes", "Jackson", "King", "Lewis", "Morgan",
      "Morris", "Parker", "Phillips", "Price", "Roberts", "Shaw", "Turner",
      "Walker", "Ward", "Watson", "Wright"};
  return lang == Language::kPt ? pt : en;
}

const std::vector<std::string>& places(Language lang) {
  static const std::vector<std::string> pt = {
      "Vale do Sol", "Monte Alto", "Ribeira Nova", "Serra Verde", "Vila Franca",
      "Castelo Velho", "Ponte Alta", "Lagoa Azul", "Quinta do Lago", "São Martinho",
      "Santa Clara", "Pedra Branca", "Outeiro", "Fontainhas", "Alvorada"};
  static const std::vector<std::string> en = {
      "Millbrook", "Ashford", "Riverside", "Oakley", "Fairview", "Kingsbridge",
      "Westfield", "Hillcrest", "Stonebury", "Elmstead", "Brookhaven", "Lakewood"};
  return lang == Language::kPt ? pt : en;
}

const std::vector<std::string>& location_templates(Language lang) {
  static const std::vector<std::string> pt = {
      "Salão Nobre dos Paços do Concelho de {}",
      "Auditório Municipal de {}",
      "Sala de Sessões da Câmara Municipal de {}",
      "Edifício dos Paços do Município de {}",
      "Centro Cultural de {}",
      "Sede da Junta de Freguesia de {}"};
  static const std::vector<std::string> en = {
      "Council Chamber of {} Town Hall",
      "{} Municipal Auditorium",
      "Main Hall of the {} Civic Centre",
      "Assembly Room, {} Municipal Building",
      "{} Community Centre"};
  return lang == Language::kPt ? pt : en;
}

template <typename T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
  return items[rng() % items.size()];
}

bool bernoulli(std::mt19937_64& rng, double p) {
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return u < p;
}

struct Edit {
  Span span;
  std::string replacement;
};

// Lowercased text with, per output byte, the source byte offset.
std::string lower_with_offsets(std::string_view text, std::vector<size_t>* offsets) {
  std::string out;
  offsets->clear();
  size_t pos = 0;
  while (pos < text.size()) {
    size_t len = 1;
    char32_t cp = decode_utf8(text, pos, &len);
    std::string piece;
    append_utf8(&piece, lower_codepoint(cp));
    for (char c : piece) {
      out.push_back(c);
      offsets->push_back(pos);
    }
    pos += len;
  }
  offsets->push_back(text.size());
  return out;
}

bool word_before(std::string_view text, size_t pos) {
  if (pos == 0) return false;
  size_t prev = pos - 1;
  while (prev > 0 && (static_cast<unsigned char>(text[prev]) & 0xC0) == 0x80) --prev;
  size_t len = 1;
  return is_word_codepoint(decode_utf8(text, prev, &len));
}

bool word_at(std::string_view text, size_t pos) {
  if (pos >= text.size()) return false;
  size_t len = 1;
  return is_word_codepoint(decode_utf8(text, pos, &len));
}

std::vector<Span> find_municipality(std::string_view text, std::string_view municipality) {
  std::vector<Span> hits;
  if (municipality.empty()) return hits;
  std::vector<size_t> offsets;
  std::string lowered = lower_with_offsets(text, &offsets);
  std::vector<size_t> unused;
  std::string needle = lower_with_offsets(municipality, &unused);
  size_t from = 0;
  while ((from = lowered.find(needle, from)) != std::string::npos) {
    Span s{offsets[from], offsets[from + needle.size()]};
    if (!word_before(text, s.begin) && !word_at(text, s.end)) hits.push_back(s);
    from += needle.size();
  }
  return hits;
}

// Maps an old offset through sorted, non-overlapping, non-empty edits. An
// offset strictly inside an edit snaps to the edited text's start (for span
// starts) or end (for span ends).
size_t remap(size_t pos, bool is_end, const std::vector<Edit>& edits,
             const std::vector<size_t>& new_begins) {
  long delta = 0;
  for (size_t i = 0; i < edits.size(); ++i) {
    const auto& e = edits[i];
    if (e.span.end <= pos) {
      delta += static_cast<long>(e.replacement.size()) - static_cast<long>(e.span.size());
    } else if (pos > e.span.begin) {
      return is_end ? new_begins[i] + e.replacement.size() : new_begins[i];
    } else {
      break;
    }
  }
  return static_cast<size_t>(static_cast<long>(pos) + delta);
}

}  // namespace

// ---------------------------------------------------------------------------

WordListGenerator::WordListGenerator(std::vector<std::string> people,
                                     std::vector<std::string> locations)
    : people_(std::move(people)), locations_(std::move(locations)) {}

WordListGenerator WordListGenerator::builtin(Language lang) {
  std::vector<std::string> people, locs;
  const auto& g = given_names(lang);
  const auto& s = surnames(lang);
  for (size_t i = 0; i < g.size(); ++i) {
    people.push_back(g[i] + " " + s[(i * 7) % s.size()]);
  }
  const auto& t = location_templates(lang);
  const auto& p = places(lang);
  for (size_t i = 0; i < p.size(); ++i) {
    locs.push_back(fmt::format(fmt::runtime(t[i % t.size()]), p[i]));
  }
  return WordListGenerator(std::move(people), std::move(locs));
}

std::string WordListGenerator::person(std::mt19937_64& rng, Language) const {
  return pick(people_, rng);
}

std::string WordListGenerator::location(std::mt19937_64& rng, Language) const {
  return pick(locations_, rng);
}

std::string LocaleGenerator::person(std::mt19937_64& rng, Language lang) const {
  std::string name = pick(given_names(lang), rng);
  if (lang == Language::kPt && rng() % 3 == 0) name += " " + pick(given_names(lang), rng);
  name += " " + pick(surnames(lang), rng);
  if (rng() % 2 == 0) name += " " + pick(surnames(lang), rng);
  return name;
}

std::string LocaleGenerator::location(std::mt19937_64& rng, Language lang) const {
  return fmt::format(fmt::runtime(pick(location_templates(lang), rng)),
                     pick(places(lang), rng));
}

// ---------------------------------------------------------------------------

void DeslexPolicy::validate(Language lang) const {
  if (!(p_name_loc >= 0 && p_name_loc <= 1) || !(p_datetime >= 0 && p_datetime <= 1)) {
    throw ConfigError("deslex probabilities must lie in [0, 1]");
  }
  if (municipality_placeholder.empty()) throw ConfigError("empty municipality placeholder");
  if (!generator) throw ConfigError("deslex policy has no surface generator");
  if (generator->person_capacity(lang) == 0 && generator->name() == "wordlist") {
    throw ConfigError("empty synthetic name pool");
  }
}

nlohmann::ordered_json DeslexPolicy::to_json() const {
  nlohmann::ordered_json j;
  j["p_name_loc"] = p_name_loc;
  j["p_datetime"] = p_datetime;
  j["municipality_placeholder"] = municipality_placeholder;
  j["seed"] = seed;
  j["datetime_variants"] = nlohmann::ordered_json::array();
  for (auto r : datetime_variants) j["datetime_variants"].push_back(rule_name(r));
  j["consistent"] = consistent;
  j["collision_free"] = collision_free;
  j["generator"] = generator ? generator->name() : "none";
  return j;
}

DeslexPolicy DeslexPolicy::from_json(const nlohmann::json& j) {
  DeslexPolicy p;
  p.p_name_loc = j.value("p_name_loc", p.p_name_loc);
  p.p_datetime = j.value("p_datetime", p.p_datetime);
  p.municipality_placeholder = j.value("municipality_placeholder", p.municipality_placeholder);
  p.seed = j.value("seed", p.seed);
  if (j.contains("datetime_variants")) {
    p.datetime_variants.clear();
    for (const auto& r : j["datetime_variants"]) {
      p.datetime_variants.insert(parse_rule(r.get<std::string>()));
    }
  }
  p.consistent = j.value("consistent", p.consistent);
  p.collision_free = j.value("collision_free", p.collision_free);
  std::string gen = j.value("generator", std::string("locale"));
  if (gen == "locale") {
    p.generator = std::make_shared<LocaleGenerator>();
  } else if (gen == "wordlist_pt" || gen == "wordlist") {
    p.generator = std::make_shared<WordListGenerator>(WordListGenerator::builtin(Language::kPt));
  } else if (gen == "wordlist_en") {
    p.generator = std::make_shared<WordListGenerator>(WordListGenerator::builtin(Language::kEn));
  } else {
    throw ConfigError("unknown surface generator '" + gen + "'");
  }
  return p;
}

// ---------------------------------------------------------------------------

AnnotatedMinute deslexicalize(const AnnotatedMinute& minute, const DeslexPolicy& policy,
                              DeslexTrace* trace) {
  const Language lang = minute.doc.language;
  policy.validate(lang);
  DeslexTrace local;
  DeslexTrace& tr = trace ? *trace : local;
  std::mt19937_64 rng(mix64(policy.seed ^ fnv1a(minute.doc.doc_id)));
  const std::string& text = minute.doc.text;

  // Collision-free mode needs one distinct value per distinct surface.
  if (policy.collision_free) {
    std::set<std::string> persons, locations;
    for (const auto& e : minute.entities) {
      if (is_participant(e.category.kind)) persons.insert(e.surface);
      if (e.category.kind == Kind::kLocation) locations.insert(e.surface);
    }
    size_t pc = policy.generator->person_capacity(lang);
    size_t lc = policy.generator->location_capacity(lang);
    if ((pc && pc < persons.size()) || (lc && lc < locations.size())) {
      throw PoolExhausted(fmt::format("doc '{}': synthetic pool too small for {} names / {} locations",
                                      minute.doc.doc_id, persons.size(), locations.size()));
    }
  }

  std::vector<Edit> edits;
  std::map<std::string, std::string> chosen;
  std::set<std::string> used;
  for (const auto& e : minute.entities) {
    Kind k = e.category.kind;
    if (is_participant(k) || k == Kind::kLocation) {
      ++tr.name_loc_candidates;
      if (!bernoulli(rng, policy.p_name_loc)) continue;
      ++tr.name_loc_replaced;
      std::string key = std::string(kind_name(is_participant(k) ? Kind::kPresident : k)) +
                        "\x1f" + e.surface;
      std::string value;
      auto it = chosen.find(key);
      if (policy.consistent && it != chosen.end()) {
        value = it->second;
      } else {
        bool found = false;
        for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
          value = is_participant(k) ? policy.generator->person(rng, lang)
                                    : policy.generator->location(rng, lang);
          found = value != e.surface && (!policy.collision_free || !used.count(value));
          if (!policy.collision_free && attempt >= 8) found = true;
        }
        if (!found) {
          throw PoolExhausted("doc '" + minute.doc.doc_id + "': no unused synthetic surface left");
        }
        chosen[key] = value;
        used.insert(value);
      }
      edits.push_back({e.span, value});
    } else if (k == Kind::kDate || k == Kind::kStartTime || k == Kind::kEndTime) {
      ++tr.datetime_candidates;
      if (!bernoulli(rng, policy.p_datetime)) continue;
      ++tr.datetime_perturbed;
      std::string value = perturb_datetime(e.surface, policy.datetime_variants, rng, lang);
      if (value != e.surface) edits.push_back({e.span, value});
    }
  }
  for (const Span& hit : find_municipality(text, minute.doc.municipality)) {
    bool covered = std::any_of(edits.begin(), edits.end(),
                               [&](const Edit& e) { return e.span.overlaps(hit); });
    if (covered) continue;
    edits.push_back({hit, policy.municipality_placeholder});
    ++tr.municipality_replaced;
  }
  std::sort(edits.begin(), edits.end(),
            [](const Edit& a, const Edit& b) { return a.span < b.span; });

  AnnotatedMinute out = minute;
  std::string& new_text = out.doc.text;
  new_text.clear();
  std::vector<size_t> new_begins;
  size_t cursor = 0;
  for (const auto& e : edits) {
    new_text.append(text, cursor, e.span.begin - cursor);
    new_begins.push_back(new_text.size());
    new_text += e.replacement;
    cursor = e.span.end;
  }
  new_text.append(text, cursor, std::string::npos);
  out.doc.sentences = sentence_split(new_text, lang);

  for (auto& e : out.entities) {
    e.span = {remap(e.span.begin, false, edits, new_begins),
              remap(e.span.end, true, edits, new_begins)};
    e.surface = std::string(slice(new_text, e.span));
  }
  for (auto& s : out.segments) {
    if (!s.span) continue;
    Span moved{remap(s.span->begin, false, edits, new_begins),
               remap(s.span->end, true, edits, new_begins)};
    s.span = snap_to_sentences(out.doc.sentences, moved);
  }
  nlohmann::ordered_json prov;
  prov["seed"] = policy.seed;
  prov["policy"] = policy.to_json();
  out.deslex = prov;
  validate_minute(out);
  return out;
}

Corpus deslexicalize_corpus(const Corpus& corpus, const DeslexPolicy& policy) {
  std::vector<AnnotatedMinute> out;
  out.reserve(corpus.size());
  for (const auto& m : corpus.minutes()) out.push_back(deslexicalize(m, policy));
  return Corpus(std::move(out));
}

}  // namespace miner
