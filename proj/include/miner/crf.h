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

// Linear-chain CRF over tag sequences: Viterbi decoding, the forward-backward
// algorithm and the negative log-likelihood gradient.

#ifndef MINER_CRF_H_
#define MINER_CRF_H_

#include <limits>
#include <vector>

#include "json.hpp"

namespace miner {

// emissions[t][y]: score of tag y at position t.
using Emissions = std::vector<std::vector<double>>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct CrfParameters {
  int num_tags = 0;
  std::vector<double> transition;  // [from * num_tags + to]
  std::vector<double> start;
  std::vector<double> end;

  static CrfParameters zeros(int num_tags);
  double at(int from, int to) const { return transition[from * num_tags + to]; }
  double& at(int from, int to) { return transition[from * num_tags + to]; }

  // Masked entries serialize as null.
  nlohmann::json to_json() const;
  static CrfParameters from_json(const nlohmann::json& j);
};

// Sets transitions into I-l from anything but B-l / I-l, and starting in an
// I tag, to -inf. Tag ids follow LabelInventory (0 = O, 1 + 2l, 2 + 2l).
void mask_bio_transitions(CrfParameters* crf);

// Highest-scoring tag path; ties go to the lowest tag index. Throws
// DimensionError on an empty sequence or mismatched sizes.
std::vector<int> viterbi_decode(const Emissions& emissions, const CrfParameters& crf);

// Emission + start + transition + end score of one path.
double path_score(const Emissions& emissions, const CrfParameters& crf,
                  const std::vector<int>& tags);

// log of the sum of exp(path_score) over all paths.
double log_partition(const Emissions& emissions, const CrfParameters& crf);

// Per-position tag posteriors.
Emissions tag_marginals(const Emissions& emissions, const CrfParameters& crf);

struct CrfGradient {
  Emissions emissions;
  std::vector<double> transition;
  std::vector<double> start;
  std::vector<double> end;
};

// Negative log-likelihood of `gold`; fills the gradient with respect to
// emissions and parameters (expected minus observed counts).
double crf_nll(const Emissions& emissions, const CrfParameters& crf, const std::vector<int>& gold,
               CrfGradient* grad);

}  // namespace miner

#endif  // MINER_CRF_H_
