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

#ifndef MINER_TESTS_UNIT_TEST_UTIL_H_
#define MINER_TESTS_UNIT_TEST_UTIL_H_

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "miner/corpus.h"
#include "miner/errors.h"
#include "miner/synth.h"

namespace miner::testing {

// Byte span of the `nth` occurrence of `needle`.
inline Span find_span(std::string_view text, std::string_view needle, int nth = 0) {
  size_t pos = text.find(needle);
  for (int i = 0; i < nth && pos != std::string_view::npos; ++i) pos = text.find(needle, pos + 1);
  if (pos == std::string_view::npos) throw std::runtime_error("needle not found");
  return {pos, pos + needle.size()};
}

struct Mention {
  Category category;
  std::string surface;
  int nth = 0;
};

// A minute whose opening is the text up to `opening_end` (exclusive marker)
// and whose closing is the given sentence, or null.
inline AnnotatedMinute make_minute(const std::string& id, const std::string& municipality,
                                   const std::string& text, const std::vector<Mention>& mentions,
                                   std::string_view opening, std::string_view closing,
                                   Language lang = Language::kPt) {
  AnnotatedMinute m;
  m.doc.doc_id = id;
  m.doc.municipality = municipality;
  m.doc.language = lang;
  m.doc.text = text;
  m.doc.sentences = sentence_split(text, lang);
  for (const auto& x : mentions) {
    Span s = find_span(text, x.surface, x.nth);
    m.entities.push_back({x.category, s, x.surface});
  }
  std::sort(m.entities.begin(), m.entities.end(),
            [](const auto& a, const auto& b) { return a.span < b.span; });
  m.segments.push_back({SegmentType::kOpening,
                         opening.empty() ? std::nullopt : std::optional(find_span(text, opening))});
  m.segments.push_back({SegmentType::kClosing,
                         closing.empty() ? std::nullopt : std::optional(find_span(text, closing))});
  validate_minute(m);
  return m;
}

inline Category cat(Kind k, Presence p = Presence::kNotApplicable) {
  return make_category(k, is_participant(k) ? std::optional(p == Presence::kNotApplicable
                                                                ? Presence::kPresent
                                                                : p)
                                            : std::nullopt);
}

// A short annotated Portuguese minute with accented text.
inline AnnotatedMinute sample_minute(const std::string& id = "doc-1",
                                     const std::string& muni = "Vale Serrano") {
  const std::string opening =
      "Ata n.º 12/2023. Aos 12 de março de 2023, no Salão Nobre, reuniu a Câmara Municipal de " +
      muni + ", sob a presidência do Senhor João Silva, estando presentes os Vereadores "
             "Maria Gonçalves e Rui Peres. Faltou a Vereadora Inês Araújo.";
  const std::string body =
      "\n\nORDEM DO DIA\n\nFoi aprovada a ata da reunião anterior. O Vereador Rui Peres "
      "questionou o executivo sobre a pavimentação da estrada municipal.\n\n";
  const std::string closing =
      "E nada mais havendo a tratar, foi encerrada a reunião pelas 12h30.";
  const std::string text = opening + body + closing;
  return make_minute(id, muni, text,
                     {{cat(Kind::kMeetingNumber), "12/2023"},
                      {cat(Kind::kDate), "12 de março de 2023"},
                      {cat(Kind::kLocation), "Salão Nobre"},
                      {cat(Kind::kPresident), "João Silva"},
                      {cat(Kind::kCouncilor, Presence::kPresent), "Maria Gonçalves"},
                      {cat(Kind::kCouncilor, Presence::kPresent), "Rui Peres"},
                      {cat(Kind::kCouncilor, Presence::kAbsent), "Inês Araújo"},
                      {cat(Kind::kEndTime), "12h30"}},
                     opening, closing);
}

inline const Corpus& synthetic_corpus() {
  static const Corpus corpus = generate_synthetic_corpus();
  return corpus;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("miner-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace miner::testing

#endif  // MINER_TESTS_UNIT_TEST_UTIL_H_
