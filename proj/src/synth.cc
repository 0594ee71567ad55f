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

#include "miner/synth.h"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "fmt/format.h"
#include "miner/errors.h"

namespace miner {
namespace {

// Plain modulo draws keep the stream identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}
  size_t below(size_t n) { return static_cast<size_t>(gen_() % n); }
  int between(int lo, int hi) { return lo + static_cast<int>(below(hi - lo + 1)); }
  bool chance(double p) { return static_cast<double>(gen_() % 1000000) < p * 1e6; }
  template <typename T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

 private:
  std::mt19937_64 gen_;
};

const std::vector<std::string> kMunicipalities = {
    "Vale Serrano", "Monte Alvo", "Ribeira Alta", "Castelo Novo", "Porto Claro", "Serra Fria"};

const std::vector<std::string> kGivenMale = {
    "João", "António", "Manuel", "José", "Rui", "Paulo", "Carlos", "Luís",
    "Pedro", "Miguel", "Nuno", "Jorge", "Tiago", "Ricardo", "Hugo", "Vítor"};
const std::vector<std::string> kGivenFemale = {
    "Maria", "Ana", "Isabel", "Teresa", "Sofia", "Helena", "Cristina", "Rita",
    "Joana", "Marta", "Catarina", "Paula", "Inês", "Susana", "Lúcia", "Filipa"};
const std::vector<std::string> kSurnames = {
    "Silva", "Santos", "Ferreira", "Pereira", "Oliveira", "Costa", "Rodrigues",
    "Martins", "Sousa", "Fernandes", "Gonçalves", "Gomes", "Lopes", "Marques",
    "Alves", "Almeida", "Ribeiro", "Pinto", "Carvalho", "Teixeira", "Moreira",
    "Correia", "Mendes", "Nunes", "Soares", "Vieira", "Monteiro", "Cardoso",
    "Rocha", "Neves", "Coelho", "Cruz", "Cunha", "Pires", "Ramos", "Reis"};

const std::vector<std::string> kMonths = {
    "janeiro", "fevereiro", "março", "abril", "maio", "junho",
    "julho", "agosto", "setembro", "outubro", "novembro", "dezembro"};

const std::vector<std::string> kUnits = {
    "zero", "um", "dois", "três", "quatro", "cinco", "seis", "sete", "oito", "nove",
    "dez", "onze", "doze", "treze", "catorze", "quinze", "dezasseis", "dezassete",
    "dezoito", "dezanove"};
const std::vector<std::string> kTens = {"", "", "vinte", "trinta"};

std::string number_words(int n) {
  if (n < 20) return kUnits[n];
  std::string s = kTens[n / 10];
  if (n % 10) s += " e " + kUnits[n % 10];
  return s;
}

std::string day_words(int day) {
  if (day == 1) return "primeiro dia";
  return number_words(day) + " dias";
}

std::string year_words(int year) {
  return "dois mil e " + number_words(year - 2000);
}

struct Person {
  std::string name;
  bool female = false;
};

Person make_person(Rng& rng, std::vector<std::string>& used) {
  for (;;) {
    Person p;
    p.female = rng.chance(0.45);
    const std::string& given = p.female ? rng.pick(kGivenFemale) : rng.pick(kGivenMale);
    const std::string& s1 = rng.pick(kSurnames);
    p.name = given + " " + s1;
    if (rng.chance(0.5)) {
      const std::string& s2 = rng.pick(kSurnames);
      if (s2 != s1) p.name += " " + s2;
    }
    if (std::find(used.begin(), used.end(), p.name) == used.end()) {
      used.push_back(p.name);
      return p;
    }
  }
}

std::string vereador(const Person& p) { return p.female ? "a Vereadora" : "o Vereador"; }
std::string Vereador(const Person& p) { return p.female ? "A Vereadora" : "O Vereador"; }

struct Council {
  std::string municipality;
  Person president;
  std::vector<Person> councilors;
  std::vector<Person> substitutes;
  Person secretary;
};

struct Meeting {
  int number = 1;
  int day = 1, month = 1, year = 2023;
  int start_h = 9, start_m = 30;
  int end_h = 12, end_m = 0;
  bool extraordinary = false;
  bool with_type = true;
  bool with_location = true;
  bool with_closing = true;
  std::string location;
  std::vector<Person> present;
  std::vector<Person> absent;
  std::optional<std::pair<Person, Person>> substitution;  // substituted, substitute
};

std::string hhmm(int h, int m, char sep) {
  if (sep == 'h') return fmt::format("{}h{:02d}", h, m);
  return fmt::format("{}:{:02d}", h, m);
}

class Builder {
 public:
  void add(std::string_view s) { text_ += s; }
  void entity(std::string_view s, Category c) {
    Span span{text_.size(), text_.size() + s.size()};
    text_ += s;
    entities_.push_back({c, span, std::string(s)});
  }
  size_t pos() const { return text_.size(); }
  std::string& text() { return text_; }
  std::vector<EntityAnnotation>& entities() { return entities_; }

 private:
  std::string text_;
  std::vector<EntityAnnotation> entities_;
};

const Category kNumber{Kind::kMeetingNumber, Presence::kNotApplicable};
const Category kType{Kind::kMeetingType, Presence::kNotApplicable};
const Category kDate{Kind::kDate, Presence::kNotApplicable};
const Category kLocation{Kind::kLocation, Presence::kNotApplicable};
const Category kStart{Kind::kStartTime, Presence::kNotApplicable};
const Category kEnd{Kind::kEndTime, Presence::kNotApplicable};
const Category kPresident{Kind::kPresident, Presence::kPresent};
const Category kPresent{Kind::kCouncilor, Presence::kPresent};
const Category kAbsent{Kind::kCouncilor, Presence::kAbsent};
const Category kSubstituted{Kind::kCouncilor, Presence::kSubstituted};

void name_list(Builder& b, const std::vector<Person>& people, Category c,
               std::string_view last_sep = " e ") {
  for (size_t i = 0; i < people.size(); ++i) {
    if (i > 0) b.add(i + 1 == people.size() ? last_sep : ", ");
    b.entity(people[i].name, c);
  }
}

std::string type_word(const Meeting& m, bool upper, bool capital) {
  std::string w = m.extraordinary ? "extraordinária" : "ordinária";
  if (upper) return m.extraordinary ? "EXTRAORDINÁRIA" : "ORDINÁRIA";
  if (capital) return m.extraordinary ? "Extraordinária" : "Ordinária";
  return w;
}

void substitution_sentence(Builder& b, const Meeting& m, int style) {
  if (!m.substitution) return;
  const auto& [out, in] = *m.substitution;
  if (style == 5) {
    b.add(Vereador(out) + " ");
    b.entity(out.name, kSubstituted);
    b.add(" fez-se substituir por ");
    b.entity(in.name, kPresent);
    b.add(". ");
  } else {
    b.add(Vereador(out) + " ");
    b.entity(out.name, kSubstituted);
    b.add(out.female ? " foi substituída por " : " foi substituído por ");
    b.entity(in.name, kPresent);
    b.add(". ");
  }
}

void absent_sentence(Builder& b, const Meeting& m, int style) {
  if (m.absent.empty()) return;
  if (style == 2) {
    b.add(m.absent.size() == 1 ? "Não esteve presente " + vereador(m.absent[0]) + " "
                               : "Não estiveram presentes os Vereadores ");
  } else if (m.absent.size() == 1) {
    b.add("Faltou " + vereador(m.absent[0]) + " ");
  } else {
    b.add("Faltaram os Vereadores ");
  }
  name_list(b, m.absent, kAbsent);
  b.add(style == 0 ? ", por motivo justificado. " : ". ");
}

// Writes the opening segment; returns its end offset.
size_t write_opening(Builder& b, const Council& c, const Meeting& m, int style) {
  const std::string& muni = c.municipality;
  const std::string month = kMonths[m.month - 1];
  std::string president_title =
      c.president.female ? "a Senhora Presidente" : "o Senhor Presidente";
  switch (style) {
    case 0: {
      b.add("ATA N.º ");
      b.entity(fmt::format("{}/{}", m.number, m.year), kNumber);
      b.add("\n\nAos ");
      b.entity(fmt::format("{} de {} de {}", m.day, month, m.year), kDate);
      b.add(", ");
      if (m.with_location) {
        b.entity(m.location, kLocation);
        b.add(", ");
      }
      b.add("reuniu ");
      if (m.with_type) {
        b.add("em sessão ");
        b.entity(type_word(m, false, false), kType);
        b.add(" ");
      }
      b.add("a Câmara Municipal de " + muni + ", sob a presidência d" +
            std::string(c.president.female ? "a Senhora Presidente " : "o Senhor Presidente "));
      b.entity(c.president.name, kPresident);
      b.add(", estando presentes os Senhores Vereadores ");
      name_list(b, m.present, kPresent);
      b.add(". ");
      absent_sentence(b, m, style);
      substitution_sentence(b, m, style);
      b.add("Pelas ");
      b.entity(hhmm(m.start_h, m.start_m, 'h'), kStart);
      b.add(", " + president_title + " declarou aberta a reunião.");
      break;
    }
    case 1: {
      b.add("ACTA DA REUNIÃO ");
      if (m.with_type) {
        b.entity(type_word(m, true, false), kType);
        b.add(" ");
      }
      b.add("N.º ");
      b.entity(std::to_string(m.number), kNumber);
      b.add("\n\nData: ");
      b.entity(fmt::format("{:02d}/{:02d}/{}", m.day, m.month, m.year), kDate);
      if (m.with_location) {
        b.add("\n\nLocal: ");
        b.entity(m.location, kLocation);
      }
      b.add("\n\nHora de início: ");
      b.entity(hhmm(m.start_h, m.start_m, ':'), kStart);
      b.add("\n\nPresidente: ");
      b.entity(c.president.name, kPresident);
      b.add("\n\nVereadores presentes: ");
      name_list(b, m.present, kPresent, ", ");
      if (!m.absent.empty()) {
        b.add("\n\nVereadores ausentes: ");
        name_list(b, m.absent, kAbsent, ", ");
      }
      if (m.substitution) {
        b.add("\n\nSubstituições: ");
        b.entity(m.substitution->first.name, kSubstituted);
        b.add(" substituído por ");
        b.entity(m.substitution->second.name, kPresent);
      }
      break;
    }
    case 2: {
      b.add("Ata n.º ");
      b.entity(std::to_string(m.number), kNumber);
      b.add("\n\nNo dia ");
      b.entity(fmt::format("{} de {} de {}", m.day, month, m.year), kDate);
      b.add(", pelas ");
      b.entity(hhmm(m.start_h, m.start_m, 'h'), kStart);
      b.add(", ");
      if (m.with_location) {
        b.entity(m.location, kLocation);
        b.add(", ");
      }
      b.add("realizou-se a reunião ");
      if (m.with_type) {
        b.entity(type_word(m, false, false), kType);
        b.add(" ");
      }
      b.add("da Câmara Municipal de " + muni + ", presidida pel" +
            std::string(c.president.female ? "a Senhora Presidente " : "o Senhor Presidente "));
      b.entity(c.president.name, kPresident);
      b.add(". Estiveram presentes os Vereadores ");
      name_list(b, m.present, kPresent);
      b.add(". ");
      absent_sentence(b, m, style);
      substitution_sentence(b, m, style);
      break;
    }
    case 3: {
      b.add("ATA NÚMERO ");
      b.entity(std::to_string(m.number), kNumber);
      b.add("\n\nAos ");
      b.entity(fmt::format("{} do mês de {} do ano de {}", day_words(m.day), month,
                           year_words(m.year)),
               kDate);
      b.add(", nesta vila de " + muni + " e ");
      if (m.with_location) {
        b.entity(m.location, kLocation);
        b.add(", ");
      }
      b.add("realizou-se a reunião ");
      if (m.with_type) {
        b.entity(type_word(m, false, false), kType);
        b.add(" ");
      }
      b.add("desta Câmara Municipal, com a presença d" +
            std::string(c.president.female ? "a Senhora " : "o Senhor "));
      b.entity(c.president.name, kPresident);
      b.add(", Presidente da Câmara, e dos Vereadores ");
      name_list(b, m.present, kPresent);
      b.add(". ");
      absent_sentence(b, m, style);
      substitution_sentence(b, m, style);
      b.add("Eram ");
      b.entity(hhmm(m.start_h, m.start_m, 'h'), kStart);
      b.add(" quando " + president_title + " declarou aberta a reunião.");
      break;
    }
    case 4: {
      b.add("Câmara Municipal de " + muni + "\n\nAta da Reunião ");
      if (m.with_type) {
        b.entity(type_word(m, false, true), kType);
        b.add(" ");
      }
      b.add("n.º ");
      b.entity(fmt::format("{}/{}", m.number, m.year), kNumber);
      b.add("\n\nData: ");
      b.entity(fmt::format("{}-{:02d}-{:02d}", m.year, m.month, m.day), kDate);
      b.add(". Hora: ");
      b.entity(hhmm(m.start_h, m.start_m, ':'), kStart);
      b.add(". ");
      if (m.with_location) {
        b.add("Local: ");
        b.entity(m.location, kLocation);
        b.add(". ");
      }
      b.add("Presidiu à reunião " + std::string(c.president.female ? "a" : "o") +
            " Presidente da Câmara, ");
      b.entity(c.president.name, kPresident);
      b.add(". Presenças: ");
      name_list(b, m.present, kPresent);
      b.add(". ");
      if (!m.absent.empty()) {
        b.add("Ausências: ");
        name_list(b, m.absent, kAbsent);
        b.add(". ");
      }
      substitution_sentence(b, m, style);
      break;
    }
    default: {
      b.add("ATA N.º ");
      b.entity(std::to_string(m.number), kNumber);
      b.add("\n\nEm ");
      b.entity(fmt::format("{:02d}-{:02d}-{}", m.day, m.month, m.year), kDate);
      b.add(", pelas ");
      b.entity(hhmm(m.start_h, m.start_m, 'h'), kStart);
      b.add(", reuniu ");
      if (m.with_type) {
        b.add("em sessão ");
        b.entity(type_word(m, false, false), kType);
        b.add(" ");
      }
      b.add("a Câmara Municipal de " + muni);
      if (m.with_location) {
        b.add(", ");
        b.entity(m.location, kLocation);
      }
      b.add(", sob a presidência d" +
            std::string(c.president.female ? "a Senhora Presidente " : "o Senhor Presidente "));
      b.entity(c.president.name, kPresident);
      b.add(". Compareceram os Vereadores ");
      name_list(b, m.present, kPresent);
      b.add(". ");
      absent_sentence(b, m, style);
      substitution_sentence(b, m, style);
      break;
    }
  }
  // Trailing spaces are not part of the segment.
  while (!b.text().empty() && b.text().back() == ' ') b.text().pop_back();
  return b.pos();
}

const std::vector<std::string> kBodyHeadings = {
    "PERÍODO DE ANTES DA ORDEM DO DIA", "ORDEM DO DIA", "ANTES DA ORDEM DO DIA",
    "PERÍODO ANTES DA ORDEM DO DIA", "ORDEM DE TRABALHOS", "INTERVENÇÃO DO PÚBLICO"};

const std::vector<std::string> kTopics = {
    "a atribuição de subsídios às associações culturais",
    "a empreitada de requalificação da Escola Básica",
    "o regulamento municipal de resíduos urbanos",
    "a revisão do Plano Diretor Municipal",
    "a aquisição de viaturas para a recolha de lixo",
    "o protocolo de cooperação com a junta de freguesia",
    "a abertura de procedimento concursal para assistentes operacionais",
    "a alteração ao orçamento e às grandes opções do plano",
    "a pavimentação da estrada municipal",
    "o apoio ao transporte escolar",
    "a isenção de taxas para instituições particulares de solidariedade social",
    "a concessão da exploração do bar das piscinas municipais",
    "a celebração do contrato de fornecimento de energia",
    "a programação das festas do concelho",
    "a reabilitação do mercado municipal",
    "a candidatura a fundos comunitários para eficiência energética",
    "o loteamento da zona industrial",
    "a toponímia dos novos arruamentos",
    "a gestão das bolsas de estudo para o ensino superior",
    "a limpeza de terrenos e a prevenção de incêndios"};

const std::vector<std::string> kClauses = {
    "o processo se encontra devidamente instruído",
    "os serviços técnicos emitiram parecer favorável",
    "existe cabimento orçamental para a despesa",
    "a proposta foi discutida com as associações locais",
    "o prazo de consulta pública já terminou",
    "não foram apresentadas reclamações",
    "a obra deverá estar concluída até ao final do ano",
    "os valores foram atualizados de acordo com a inflação",
    "a medida beneficia sobretudo as famílias mais carenciadas",
    "o município pretende reforçar o investimento nas freguesias"};

const std::vector<std::string> kPlaces = {
    "auditório da biblioteca", "pavilhão gimnodesportivo", "centro cultural",
    "quartel dos bombeiros", "salão paroquial", "escola secundária"};

std::string capitalize_first(std::string s) {
  // Topics start with an ASCII article.
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

// Upper case for ASCII and Latin-1 letters, enough for the topic lists.
std::string upper_latin(std::string_view s) {
  std::string out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t len = 1;
    char32_t cp = decode_utf8(s, pos, &len);
    if ((cp >= 'a' && cp <= 'z') || (cp >= 0xE0 && cp <= 0xFE && cp != 0xF7)) cp -= 32;
    append_utf8(&out, cp);
    pos += len;
  }
  return out;
}

std::string body_sentence(Rng& rng, const Council& c, const Meeting& m) {
  const Person& who = rng.pick(c.councilors);
  const std::string& topic = rng.pick(kTopics);
  const std::string& clause = rng.pick(kClauses);
  switch (rng.below(10)) {
    case 0:
      return fmt::format("Foi presente a proposta n.º {}/{} relativa a {}, que se dá por transcrita.",
                         rng.between(10, 250), m.year, topic.substr(2));
    case 1:
      return fmt::format("{} {} questionou o executivo sobre {}, tendo sido esclarecido que {}.",
                         Vereador(who), who.name, topic, clause);
    case 2:
      return fmt::format("A Câmara deliberou, por unanimidade, aprovar {}.", topic);
    case 3:
      return fmt::format("A deliberação foi tomada com {} votos a favor e {} abstenções.",
                         number_words(rng.between(3, 6)), number_words(rng.between(1, 2)));
    case 4:
      return fmt::format("O prazo de execução termina a {} de {} de {}.", rng.between(1, 28),
                         rng.pick(kMonths), m.year + 1);
    case 5:
      return fmt::format("A sessão pública de esclarecimento terá lugar no dia {:02d}/{:02d}/{}, "
                         "pelas {}, no {}.",
                         rng.between(1, 28), rng.between(1, 12), m.year,
                         hhmm(rng.between(14, 21), 30 * rng.between(0, 1), 'h'), rng.pick(kPlaces));
    case 6:
      return fmt::format("Interveio {} {}, que manifestou preocupação com {}.", vereador(who),
                         who.name, topic);
    case 7:
      return fmt::format("Considerando que {}, e tendo em conta que {}, propõe-se {}.", clause,
                         rng.pick(kClauses), topic);
    case 8:
      return fmt::format("Em resposta, o Presidente {} informou que {}.", c.president.name, clause);
    default:
      return fmt::format("{} salientou que {} e que {}.", capitalize_first(vereador(who)) + " " +
                         who.name, clause, rng.pick(kClauses));
  }
}

void write_body(Builder& b, Rng& rng, const Council& c, const Meeting& m, int style,
                int min_tokens) {
  b.add("\n\n" + kBodyHeadings[style % kBodyHeadings.size()] + "\n\n");
  const size_t start = b.pos();
  int item = 1;
  while (true) {
    size_t tokens = tokenize_words(std::string_view(b.text()).substr(start)).size();
    if (static_cast<int>(tokens) >= min_tokens) break;
    b.add(fmt::format("PONTO {} - {}\n\n", item++, upper_latin(rng.pick(kTopics))));
    int sentences = rng.between(5, 9);
    for (int s = 0; s < sentences; ++s) {
      if (s > 0) b.add(" ");
      b.add(body_sentence(rng, c, m));
    }
    b.add("\n\n");
  }
}

// Writes the closing segment; returns its span.
Span write_closing(Builder& b, const Council& c, const Meeting& m, int style) {
  const size_t begin = b.pos();
  std::string title = c.president.female ? "a Senhora Presidente" : "o Senhor Presidente";
  switch (style) {
    case 0:
      b.add("E nada mais havendo a tratar, " + title + " declarou encerrada a reunião pelas ");
      b.entity(hhmm(m.end_h, m.end_m, 'h'), kEnd);
      b.add(", da qual se lavrou a presente ata, que vai ser assinada pelo Presidente e por mim, " +
            c.secretary.name + ", que a redigi.");
      break;
    case 1:
      b.add("Hora de encerramento: ");
      b.entity(hhmm(m.end_h, m.end_m, ':'), kEnd);
      b.add("\n\nA presente acta foi aprovada em minuta e vai ser assinada por " +
            c.secretary.name + ".");
      break;
    case 2:
      b.add("Nada mais havendo a tratar, " + title + " deu por encerrada a reunião às ");
      b.entity(hhmm(m.end_h, m.end_m, 'h'), kEnd);
      b.add(".");
      break;
    case 3:
      b.add("E não havendo mais assuntos a tratar, foi encerrada a reunião quando eram ");
      b.entity(hhmm(m.end_h, m.end_m, 'h'), kEnd);
      b.add(", tendo sido lavrada a presente ata por " + c.secretary.name + ".");
      break;
    case 4:
      b.add("A reunião foi encerrada às ");
      b.entity(hhmm(m.end_h, m.end_m, ':'), kEnd);
      b.add(".");
      break;
    default:
      b.add("Eram ");
      b.entity(hhmm(m.end_h, m.end_m, 'h'), kEnd);
      b.add(" quando " + title + " deu por encerrada a reunião.");
      break;
  }
  return {begin, b.pos()};
}

const std::vector<std::vector<std::string>> kLocations = {
    {"no Salão Nobre dos Paços do Concelho", "na Sala de Reuniões dos Paços do Concelho"},
    {"Sala de Reuniões do Edifício Municipal", "Auditório Municipal"},
    {"na Sala de Sessões da Câmara Municipal", "no Auditório da Biblioteca Municipal"},
    {"no edifício dos Paços do Município", "na sala de reuniões do Município"},
    {"Salão Nobre", "Sala de Sessões"},
    {"no Salão Nobre", "na Casa da Cultura"}};

}  // namespace

Corpus generate_synthetic_corpus(const SynthConfig& config) {
  if (config.municipalities < 1 || config.docs_per_municipality < 1) {
    throw ConfigError("synthetic corpus needs at least one municipality and one document");
  }
  Rng rng(config.seed);
  std::vector<std::string> used_names;
  std::vector<AnnotatedMinute> minutes;
  for (int mi = 0; mi < config.municipalities; ++mi) {
    const int style = mi % 6;
    Council council;
    council.municipality = kMunicipalities[mi % kMunicipalities.size()];
    if (mi >= static_cast<int>(kMunicipalities.size())) {
      council.municipality += " " + std::to_string(mi / kMunicipalities.size() + 1);
    }
    council.president = make_person(rng, used_names);
    for (int k = 0; k < 7; ++k) council.councilors.push_back(make_person(rng, used_names));
    for (int k = 0; k < 3; ++k) council.substitutes.push_back(make_person(rng, used_names));
    council.secretary = make_person(rng, used_names);

    int number = rng.between(1, 20);
    int year = 2019 + static_cast<int>(rng.below(5));
    int month = rng.between(1, 10);
    int day = rng.between(1, 14);
    for (int d = 0; d < config.docs_per_municipality; ++d) {
      Meeting m;
      m.number = number++;
      m.year = year;
      m.month = month;
      m.day = day;
      day += 14;
      if (day > 28) {
        day -= 28;
        if (++month > 12) {
          month = 1;
          ++year;
        }
      }
      m.extraordinary = rng.chance(0.15);
      m.with_type = rng.chance(config.meeting_type_rate);
      m.with_location = rng.chance(config.location_rate);
      m.with_closing = rng.chance(config.closing_rate);
      m.location = rng.pick(kLocations[style]);
      m.start_h = rng.between(9, 17);
      m.start_m = 15 * rng.between(0, 3);
      m.end_h = m.start_h + rng.between(1, 4);
      m.end_m = 5 * rng.between(0, 11);

      std::vector<Person> pool = council.councilors;
      for (size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.below(i)]);
      size_t cursor = 0;
      if (rng.chance(config.absent_rate)) {
        int n = rng.chance(0.3) ? 2 : 1;
        for (int k = 0; k < n; ++k) m.absent.push_back(pool[cursor++]);
      }
      if (rng.chance(config.substitution_rate)) {
        m.substitution.emplace(pool[cursor++], rng.pick(council.substitutes));
      }
      int present = rng.between(3, 5);
      for (int k = 0; k < present && cursor < pool.size(); ++k) m.present.push_back(pool[cursor++]);

      Builder b;
      const size_t opening_end = write_opening(b, council, m, style);
      write_body(b, rng, council, m, style, config.min_body_tokens);
      std::optional<Span> closing;
      if (m.with_closing) {
        closing = write_closing(b, council, m, style);
      } else {
        b.add("A presente ata foi aprovada por unanimidade.");
      }

      AnnotatedMinute minute;
      minute.doc.doc_id = fmt::format("synth-{:02d}-{:02d}", mi + 1, d + 1);
      minute.doc.municipality = council.municipality;
      minute.doc.language = Language::kPt;
      minute.doc.text = std::move(b.text());
      minute.doc.sentences = sentence_split(minute.doc.text, Language::kPt);
      minute.entities = std::move(b.entities());
      std::sort(minute.entities.begin(), minute.entities.end(),
                [](const EntityAnnotation& x, const EntityAnnotation& y) { return x.span < y.span; });
      minute.segments.push_back({SegmentType::kOpening, Span{0, opening_end}});
      minute.segments.push_back({SegmentType::kClosing, closing});
      validate_minute(minute);
      minutes.push_back(std::move(minute));
    }
  }
  return Corpus(std::move(minutes));
}

}  // namespace miner
