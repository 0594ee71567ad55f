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

// Templated synthetic minutes (Portuguese) for smoke tests and demos. Every
// fake municipality writes its minutes in its own house style; bodies are
// long agenda discussions full of distractor names, dates and times.

#ifndef MINER_SYNTH_H_
#define MINER_SYNTH_H_

#include <cstdint>

#include "miner/corpus.h"

namespace miner {

struct SynthConfig {
  int municipalities = 6;  // at most 6 house styles; names cycle beyond that
  int docs_per_municipality = 5;
  uint64_t seed = 7;
  int min_body_tokens = 1900;
  double location_rate = 0.83;
  double meeting_type_rate = 0.85;
  double absent_rate = 0.5;
  double substitution_rate = 0.3;
  double closing_rate = 0.85;
};

// Deterministic for a given config. Minutes are listed municipality by
// municipality.
Corpus generate_synthetic_corpus(const SynthConfig& config = {});

}  // namespace miner

#endif  // MINER_SYNTH_H_
