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

// Deslexicalization: training-time replacement of participant and location
// surfaces, date/time perturbation, and municipality placeholdering, with
// exact realignment of every annotation and segment span.

#ifndef MINER_DESLEX_H_
#define MINER_DESLEX_H_

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "miner/corpus.h"
#include "miner/datetime.h"

namespace miner {

// Source of synthetic participant and location names.
class SurfaceGenerator {
 public:
  virtual ~SurfaceGenerator() = default;
  virtual std::string person(std::mt19937_64& rng, Language lang) const = 0;
  virtual std::string location(std::mt19937_64& rng, Language lang) const = 0;
  // Number of distinct surfaces, or 0 when effectively unbounded.
  virtual size_t person_capacity(Language lang) const = 0;
  virtual size_t location_capacity(Language lang) const = 0;
  virtual std::string name() const = 0;
};

// Finite seeded word lists; hermetic.
class WordListGenerator : public SurfaceGenerator {
 public:
  WordListGenerator(std::vector<std::string> people, std::vector<std::string> locations);
  // Built-in lists for both languages.
  static WordListGenerator builtin(Language lang);

  std::string person(std::mt19937_64& rng, Language lang) const override;
  std::string location(std::mt19937_64& rng, Language lang) const override;
  size_t person_capacity(Language) const override { return people_.size(); }
  size_t location_capacity(Language) const override { return locations_.size(); }
  std::string name() const override { return "wordlist"; }

 private:
  std::vector<std::string> people_;
  std::vector<std::string> locations_;
};

// Composes given names, surnames and place templates per locale, in the way
// a fake-data generator would; the space of outputs is large.
class LocaleGenerator : public SurfaceGenerator {
 public:
  std::string person(std::mt19937_64& rng, Language lang) const override;
  std::string location(std::mt19937_64& rng, Language lang) const override;
  size_t person_capacity(Language) const override { return 0; }
  size_t location_capacity(Language) const override { return 0; }
  std::string name() const override { return "locale"; }
};

struct DeslexPolicy {
  double p_name_loc = 0.60;
  double p_datetime = 0.30;
  std::string municipality_placeholder = "@MUNICIPIO";
  uint64_t seed = 0;
  DatetimeVariants datetime_variants = all_datetime_rules();
  // Repeated mentions of one surface map to one synthetic value.
  bool consistent = true;
  // Distinct replacements required for distinct surfaces.
  bool collision_free = false;
  std::shared_ptr<const SurfaceGenerator> generator;

  // Throws ConfigError.
  void validate(Language lang) const;
  nlohmann::ordered_json to_json() const;
  static DeslexPolicy from_json(const nlohmann::json& j);
};

struct DeslexTrace {
  int name_loc_candidates = 0;
  int name_loc_replaced = 0;
  int datetime_candidates = 0;
  int datetime_perturbed = 0;
  int municipality_replaced = 0;
};

AnnotatedMinute deslexicalize(const AnnotatedMinute& minute, const DeslexPolicy& policy,
                              DeslexTrace* trace = nullptr);

Corpus deslexicalize_corpus(const Corpus& corpus, const DeslexPolicy& policy);

}  // namespace miner

#endif  // MINER_DESLEX_H_
