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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "miner/corpus.h"
#include "miner/crf.h"
#include "miner/errors.h"

namespace miner {
namespace {

Emissions random_emissions(std::mt19937_64& rng, int len, int tags) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Emissions e(len, std::vector<double>(tags));
  for (auto& row : e)
    for (auto& x : row) x = u(rng);
  return e;
}

CrfParameters random_crf(std::mt19937_64& rng, int tags) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CrfParameters c = CrfParameters::zeros(tags);
  for (auto& x : c.transition) x = u(rng);
  for (auto& x : c.start) x = u(rng);
  for (auto& x : c.end) x = u(rng);
  return c;
}

// Every path of length `len` over `tags` tags, in lexicographic order.
std::vector<std::vector<int>> all_paths(int len, int tags) {
  std::vector<std::vector<int>> out;
  std::vector<int> p(len, 0);
  while (true) {
    out.push_back(p);
    int i = len - 1;
    while (i >= 0 && ++p[i] == tags) p[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

TEST(Viterbi, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    int len = 1 + rng() % 4, tags = 2 + rng() % 3;
    Emissions e = random_emissions(rng, len, tags);
    CrfParameters c = random_crf(rng, tags);
    double best = kNegInf;
    std::vector<int> arg;
    double total = 0;
    for (const auto& p : all_paths(len, tags)) {
      double s = path_score(e, c, p);
      total += std::exp(s);
      if (s > best) best = s, arg = p;
    }
    EXPECT_EQ(viterbi_decode(e, c), arg);
    EXPECT_NEAR(log_partition(e, c), std::log(total), 1e-9);
  }
}

TEST(Viterbi, TiesGoToLowestTag) {
  Emissions e(3, std::vector<double>(3, 0.0));
  CrfParameters c = CrfParameters::zeros(3);
  EXPECT_EQ(viterbi_decode(e, c), (std::vector<int>{0, 0, 0}));
}

TEST(Viterbi, RejectsBadShapes) {
  CrfParameters c = CrfParameters::zeros(3);
  EXPECT_THROW(viterbi_decode({}, c), DimensionError);
  EXPECT_THROW(viterbi_decode({{0.0, 1.0}}, c), DimensionError);
}

TEST(Marginals, SumToOneAndMatchBruteForce) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    int len = 1 + rng() % 4, tags = 2 + rng() % 2;
    Emissions e = random_emissions(rng, len, tags);
    CrfParameters c = random_crf(rng, tags);
    Emissions m = tag_marginals(e, c);
    Emissions want(len, std::vector<double>(tags, 0.0));
    double z = std::exp(log_partition(e, c));
    for (const auto& p : all_paths(len, tags)) {
      double w = std::exp(path_score(e, c, p)) / z;
      for (int t = 0; t < len; ++t) want[t][p[t]] += w;
    }
    for (int t = 0; t < len; ++t) {
      double sum = 0;
      for (int y = 0; y < tags; ++y) {
        EXPECT_NEAR(m[t][y], want[t][y], 1e-9);
        sum += m[t][y];
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
}

TEST(CrfNll, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    int len = 2 + rng() % 3, tags = 3;
    Emissions e = random_emissions(rng, len, tags);
    CrfParameters c = random_crf(rng, tags);
    std::vector<int> gold(len);
    for (auto& g : gold) g = rng() % tags;
    CrfGradient grad;
    double nll = crf_nll(e, c, gold, &grad);
    EXPECT_NEAR(nll, log_partition(e, c) - path_score(e, c, gold), 1e-9);
    for (int t = 0; t < len; ++t) {
      for (int y = 0; y < tags; ++y) {
        Emissions ep = e;
        ep[t][y] += h;
        double num = (crf_nll(ep, c, gold, nullptr) - nll) / h;
        EXPECT_NEAR(grad.emissions[t][y], num, 1e-4);
      }
    }
    for (size_t i = 0; i < c.transition.size(); ++i) {
      CrfParameters cp = c;
      cp.transition[i] += h;
      EXPECT_NEAR(grad.transition[i], (crf_nll(e, cp, gold, nullptr) - nll) / h, 1e-4);
    }
    for (int y = 0; y < tags; ++y) {
      CrfParameters cs = c, ce = c;
      cs.start[y] += h;
      ce.end[y] += h;
      EXPECT_NEAR(grad.start[y], (crf_nll(e, cs, gold, nullptr) - nll) / h, 1e-4);
      EXPECT_NEAR(grad.end[y], (crf_nll(e, ce, gold, nullptr) - nll) / h, 1e-4);
    }
  }
}

bool valid_bio(const std::vector<int>& tags) {
  for (size_t i = 0; i < tags.size(); ++i) {
    if (!tag_is_inside(tags[i])) continue;
    if (i == 0) return false;
    if (tag_label(tags[i - 1]) != tag_label(tags[i])) return false;
  }
  return true;
}

TEST(Masking, DecodedPathsAreValidBio) {
  std::mt19937_64 rng(17);
  const int tags = 5;  // O, B-0, I-0, B-1, I-1
  for (int trial = 0; trial < 500; ++trial) {
    int len = 1 + rng() % 8;
    Emissions e = random_emissions(rng, len, tags);
    CrfParameters c = random_crf(rng, tags);
    mask_bio_transitions(&c);
    EXPECT_TRUE(valid_bio(viterbi_decode(e, c)));
  }
}

TEST(Masking, JsonRoundTripKeepsNegativeInfinity) {
  CrfParameters c = CrfParameters::zeros(5);
  mask_bio_transitions(&c);
  EXPECT_EQ(c.at(0, 2), kNegInf);
  EXPECT_EQ(c.start[2], kNegInf);
  EXPECT_EQ(c.at(1, 2), 0.0);
  nlohmann::json j = c.to_json();
  CrfParameters back = CrfParameters::from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.transition, c.transition);
  EXPECT_EQ(back.start, c.start);
  EXPECT_EQ(back.end, c.end);
}

TEST(Masking, LogPartitionIgnoresIllegalPaths) {
  std::mt19937_64 rng(23);
  Emissions e = random_emissions(rng, 3, 3);
  CrfParameters c = random_crf(rng, 3);
  mask_bio_transitions(&c);
  double total = 0;
  for (const auto& p : all_paths(3, 3)) {
    if (valid_bio(p)) total += std::exp(path_score(e, c, p));
  }
  EXPECT_NEAR(log_partition(e, c), std::log(total), 1e-9);
  EXPECT_TRUE(std::isfinite(crf_nll(e, c, viterbi_decode(e, c), nullptr)));
}

}  // namespace
}  // namespace miner
