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

#ifndef MINER_SPLITS_H_
#define MINER_SPLITS_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "miner/corpus.h"

namespace miner {

struct CorpusSplit {
  std::string name;
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;

  nlohmann::ordered_json to_json() const;
};

// Throws DataError when partitions intersect or name unknown documents.
void validate_split(const CorpusSplit& split, const Corpus& corpus);

// Largest-remainder apportionment of `total` items over `weights`.
std::vector<size_t> apportion(size_t total, const std::vector<double>& weights);

// Seeded Fisher-Yates shuffle; identical output on every platform.
void seeded_shuffle(std::vector<std::string>* items, uint64_t seed);

// 60/20/20 document-level split stratified by municipality.
CorpusSplit make_global_split(const Corpus& corpus, uint64_t seed,
                              bool strict = false,
                              std::array<double, 3> fractions = {0.6, 0.2, 0.2});

// One split per municipality: test = that municipality, val = 20% of the
// remaining documents (stratified), train = the rest.
std::vector<CorpusSplit> make_leave_one_out(const Corpus& corpus,
                                            uint64_t seed = 0);

struct IncrementalStep {
  int k = 0;
  std::vector<std::string> train;        // base leave-one-out training docs
  std::vector<std::string> val;
  std::vector<std::string> extra_train;  // first k target documents
  std::vector<std::string> test;         // fixed across k
};

std::vector<IncrementalStep> make_incremental_series(
    const Corpus& corpus, const std::string& target_municipality, int k_max,
    uint64_t seed);

}  // namespace miner

#endif  // MINER_SPLITS_H_
