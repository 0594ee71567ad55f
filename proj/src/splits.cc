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

#include "miner/splits.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <fmt/core.h>

#include "miner/errors.h"
#include "miner/hash.h"

namespace miner {

nlohmann::ordered_json CorpusSplit::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["train"] = train;
  j["val"] = val;
  j["test"] = test;
  return j;
}

void validate_split(const CorpusSplit& split, const Corpus& corpus) {
  std::set<std::string> seen;
  for (const auto* part : {&split.train, &split.val, &split.test}) {
    for (const auto& id : *part) {
      if (!corpus.contains(id)) {
        throw DataError(fmt::format("split '{}' names unknown doc '{}'", split.name, id));
      }
      if (!seen.insert(id).second) {
        throw DataError(fmt::format("split '{}' repeats doc '{}'", split.name, id));
      }
    }
  }
}

std::vector<size_t> apportion(size_t total, const std::vector<double>& weights) {
  double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<size_t> out(weights.size(), 0);
  if (total == 0 || sum <= 0) return out;
  std::vector<std::pair<double, size_t>> remainders;
  size_t assigned = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    double quota = total * weights[i] / sum;
    out[i] = static_cast<size_t>(std::floor(quota + 1e-9));
    assigned += out[i];
    remainders.push_back({quota - out[i], i});
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first + 1e-12; });
  for (size_t r = 0; assigned < total; r = (r + 1) % remainders.size()) {
    ++out[remainders[r].second];
    ++assigned;
  }
  return out;
}

void seeded_shuffle(std::vector<std::string>* items, uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (size_t i = items->size(); i > 1; --i) {
    size_t j = rng() % i;
    std::swap((*items)[i - 1], (*items)[j]);
  }
}

namespace {

std::map<std::string, std::vector<std::string>> group_by_municipality(
    const Corpus& corpus) {
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& m : corpus.minutes()) {
    groups[m.doc.municipality].push_back(m.doc.doc_id);
  }
  return groups;
}

// Restores corpus order inside each partition.
void sort_by_corpus_order(const Corpus& corpus, std::vector<std::string>* ids) {
  std::map<std::string, size_t> pos;
  for (size_t i = 0; i < corpus.size(); ++i) pos[corpus.minutes()[i].doc.doc_id] = i;
  std::sort(ids->begin(), ids->end(),
            [&](const auto& a, const auto& b) { return pos.at(a) < pos.at(b); });
}

}  // namespace

CorpusSplit make_global_split(const Corpus& corpus, uint64_t seed, bool strict,
                              std::array<double, 3> fractions) {
  if (corpus.empty()) throw ConfigError("cannot split an empty corpus");
  auto groups = group_by_municipality(corpus);
  std::vector<double> w(fractions.begin(), fractions.end());
  std::vector<size_t> targets = apportion(corpus.size(), w);
  double wsum = std::accumulate(w.begin(), w.end(), 0.0);

  std::vector<std::string> names;
  std::vector<std::array<size_t, 3>> counts;
  std::vector<std::array<double, 3>> remainders;
  std::array<size_t, 3> col{0, 0, 0};
  for (const auto& [muni, docs] : groups) {
    size_t n = docs.size();
    if (strict && n < 3) {
      throw ConfigError(fmt::format(
          "municipality '{}' has {} documents; strict stratification needs 3", muni, n));
    }
    std::array<size_t, 3> c{};
    std::array<double, 3> r{};
    for (int p = 0; p < 3; ++p) {
      double quota = n * w[p] / wsum;
      c[p] = static_cast<size_t>(std::floor(quota + 1e-9));
      r[p] = quota - c[p];
      if (n >= 3 && c[p] == 0) c[p] = 1;
    }
    names.push_back(muni);
    counts.push_back(c);
    remainders.push_back(r);
    for (int p = 0; p < 3; ++p) col[p] += c[p];
  }

  auto row_deficit = [&](size_t m) {
    size_t s = counts[m][0] + counts[m][1] + counts[m][2];
    return groups.at(names[m]).size() - s;
  };
  // Fill rows toward the global targets, largest remainder first.
  struct Cell { double rem; size_t m; int p; };
  std::vector<Cell> cells;
  for (size_t m = 0; m < names.size(); ++m) {
    for (int p = 0; p < 3; ++p) cells.push_back({remainders[m][p], m, p});
  }
  std::stable_sort(cells.begin(), cells.end(),
                   [](const Cell& a, const Cell& b) { return a.rem > b.rem + 1e-12; });
  for (const auto& cell : cells) {
    if (row_deficit(cell.m) > 0 && col[cell.p] < targets[cell.p]) {
      ++counts[cell.m][cell.p];
      ++col[cell.p];
    }
  }
  for (size_t m = 0; m < names.size(); ++m) {
    while (row_deficit(m) > 0) {
      int best = 0;
      for (int p = 1; p < 3; ++p) {
        long gap_p = static_cast<long>(targets[p]) - static_cast<long>(col[p]);
        long gap_b = static_cast<long>(targets[best]) - static_cast<long>(col[best]);
        if (gap_p > gap_b) best = p;
      }
      ++counts[m][best];
      ++col[best];
    }
  }

  CorpusSplit split;
  split.name = fmt::format("global-seed{}", seed);
  for (size_t m = 0; m < names.size(); ++m) {
    std::vector<std::string> docs = groups.at(names[m]);
    seeded_shuffle(&docs, seed ^ fnv1a(names[m]));
    size_t i = 0;
    for (size_t k = 0; k < counts[m][0]; ++k) split.train.push_back(docs[i++]);
    for (size_t k = 0; k < counts[m][1]; ++k) split.val.push_back(docs[i++]);
    for (size_t k = 0; k < counts[m][2]; ++k) split.test.push_back(docs[i++]);
  }
  sort_by_corpus_order(corpus, &split.train);
  sort_by_corpus_order(corpus, &split.val);
  sort_by_corpus_order(corpus, &split.test);
  return split;
}

namespace {

CorpusSplit leave_out(const Corpus& corpus,
                      const std::map<std::string, std::vector<std::string>>& groups,
                      const std::string& held_out, uint64_t seed) {
  CorpusSplit split;
  split.name = "loo-" + held_out;
  split.test = groups.at(held_out);
  for (const auto& [muni, docs] : groups) {
    if (muni == held_out) continue;
    std::vector<std::string> shuffled = docs;
    seeded_shuffle(&shuffled, seed ^ fnv1a(muni));
    auto c = apportion(shuffled.size(), {0.8, 0.2});
    for (size_t i = 0; i < shuffled.size(); ++i) {
      (i < c[0] ? split.train : split.val).push_back(shuffled[i]);
    }
  }
  sort_by_corpus_order(corpus, &split.train);
  sort_by_corpus_order(corpus, &split.val);
  sort_by_corpus_order(corpus, &split.test);
  return split;
}

}  // namespace

std::vector<CorpusSplit> make_leave_one_out(const Corpus& corpus, uint64_t seed) {
  auto groups = group_by_municipality(corpus);
  if (groups.size() < 2) {
    throw ConfigError("leave-one-out needs at least two municipalities");
  }
  std::vector<CorpusSplit> splits;
  for (const auto& muni : corpus.municipalities()) {
    splits.push_back(leave_out(corpus, groups, muni, seed));
  }
  return splits;
}

std::vector<IncrementalStep> make_incremental_series(
    const Corpus& corpus, const std::string& target_municipality, int k_max,
    uint64_t seed) {
  auto groups = group_by_municipality(corpus);
  auto it = groups.find(target_municipality);
  if (it == groups.end()) {
    throw ConfigError("unknown municipality '" + target_municipality + "'");
  }
  if (groups.size() < 2) {
    throw ConfigError("incremental protocol needs at least two municipalities");
  }
  if (k_max < 0 || static_cast<size_t>(k_max) >= it->second.size()) {
    throw ConfigError(fmt::format("k_max {} must be below the {} documents of '{}'",
                                  k_max, it->second.size(), target_municipality));
  }
  CorpusSplit base = leave_out(corpus, groups, target_municipality, seed);
  std::vector<std::string> order = it->second;
  seeded_shuffle(&order, seed ^ fnv1a("incremental") ^ fnv1a(target_municipality));
  std::vector<std::string> test(order.begin() + k_max, order.end());
  sort_by_corpus_order(corpus, &test);

  std::vector<IncrementalStep> series;
  for (int k = 0; k <= k_max; ++k) {
    IncrementalStep step;
    step.k = k;
    step.train = base.train;
    step.val = base.val;
    step.extra_train.assign(order.begin(), order.begin() + k);
    step.test = test;
    series.push_back(std::move(step));
  }
  return series;
}

}  // namespace miner
