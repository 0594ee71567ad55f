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

#include "miner/crf.h"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "miner/errors.h"

namespace miner {

CrfParameters CrfParameters::zeros(int num_tags) {
  CrfParameters crf;
  crf.num_tags = num_tags;
  crf.transition.assign(static_cast<size_t>(num_tags) * num_tags, 0.0);
  crf.start.assign(num_tags, 0.0);
  crf.end.assign(num_tags, 0.0);
  return crf;
}

namespace {

nlohmann::json encode(const std::vector<double>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : v) out.push_back(std::isinf(x) ? nlohmann::json(nullptr) : nlohmann::json(x));
  return out;
}

std::vector<double> decode(const nlohmann::json& j, size_t expected) {
  if (!j.is_array() || j.size() != expected) throw BackendError("malformed CRF parameters");
  std::vector<double> v;
  for (const auto& x : j) v.push_back(x.is_null() ? kNegInf : x.get<double>());
  return v;
}

bool is_inside(int tag) { return tag > 0 && (tag - 1) % 2 == 1; }
int label_of(int tag) { return tag == 0 ? -1 : (tag - 1) / 2; }

void check_dims(const Emissions& emissions, const CrfParameters& crf) {
  if (emissions.empty()) throw DimensionError("empty emission sequence");
  const size_t n = static_cast<size_t>(crf.num_tags);
  if (crf.num_tags <= 0 || crf.transition.size() != n * n || crf.start.size() != n ||
      crf.end.size() != n) {
    throw DimensionError("inconsistent CRF parameter sizes");
  }
  for (size_t t = 0; t < emissions.size(); ++t) {
    if (emissions[t].size() != n) {
      throw DimensionError(fmt::format("position {} has {} scores, expected {}", t,
                                       emissions[t].size(), n));
    }
  }
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// alpha[t][y]: log-sum of scores of prefixes ending in y at t (emission included).
Emissions forward(const Emissions& e, const CrfParameters& crf) {
  const int T = crf.num_tags;
  Emissions alpha(e.size(), std::vector<double>(T, kNegInf));
  for (int y = 0; y < T; ++y) alpha[0][y] = crf.start[y] + e[0][y];
  for (size_t t = 1; t < e.size(); ++t) {
    for (int y = 0; y < T; ++y) {
      double acc = kNegInf;
      for (int x = 0; x < T; ++x) acc = log_add(acc, alpha[t - 1][x] + crf.at(x, y));
      alpha[t][y] = acc + e[t][y];
    }
  }
  return alpha;
}

// beta[t][y]: log-sum of scores of suffixes after position t given y at t.
Emissions backward(const Emissions& e, const CrfParameters& crf) {
  const int T = crf.num_tags;
  const size_t n = e.size();
  Emissions beta(n, std::vector<double>(T, kNegInf));
  for (int y = 0; y < T; ++y) beta[n - 1][y] = crf.end[y];
  for (size_t t = n - 1; t-- > 0;) {
    for (int x = 0; x < T; ++x) {
      double acc = kNegInf;
      for (int y = 0; y < T; ++y) acc = log_add(acc, crf.at(x, y) + e[t + 1][y] + beta[t + 1][y]);
      beta[t][x] = acc;
    }
  }
  return beta;
}

}  // namespace

nlohmann::json CrfParameters::to_json() const {
  return {{"num_tags", num_tags},
          {"transition", encode(transition)},
          {"start", encode(start)},
          {"end", encode(end)}};
}

CrfParameters CrfParameters::from_json(const nlohmann::json& j) {
  CrfParameters crf;
  crf.num_tags = j.at("num_tags").get<int>();
  if (crf.num_tags <= 0) throw BackendError("malformed CRF parameters");
  crf.transition = decode(j.at("transition"), static_cast<size_t>(crf.num_tags) * crf.num_tags);
  crf.start = decode(j.at("start"), crf.num_tags);
  crf.end = decode(j.at("end"), crf.num_tags);
  return crf;
}

void mask_bio_transitions(CrfParameters* crf) {
  for (int to = 0; to < crf->num_tags; ++to) {
    if (!is_inside(to)) continue;
    crf->start[to] = kNegInf;
    for (int from = 0; from < crf->num_tags; ++from) {
      if (label_of(from) != label_of(to)) crf->at(from, to) = kNegInf;
    }
  }
}

std::vector<int> viterbi_decode(const Emissions& emissions, const CrfParameters& crf) {
  check_dims(emissions, crf);
  const int T = crf.num_tags;
  const size_t n = emissions.size();
  std::vector<double> score(T), next(T);
  std::vector<std::vector<int>> back(n, std::vector<int>(T, 0));
  for (int y = 0; y < T; ++y) score[y] = crf.start[y] + emissions[0][y];
  for (size_t t = 1; t < n; ++t) {
    for (int y = 0; y < T; ++y) {
      double best = kNegInf;
      int arg = 0;
      for (int x = 0; x < T; ++x) {
        double s = score[x] + crf.at(x, y);
        if (s > best) {
          best = s;
          arg = x;
        }
      }
      next[y] = best + emissions[t][y];
      back[t][y] = arg;
    }
    score.swap(next);
  }
  double best = kNegInf;
  int last = 0;
  for (int y = 0; y < T; ++y) {
    double s = score[y] + crf.end[y];
    if (s > best) {
      best = s;
      last = y;
    }
  }
  std::vector<int> tags(n);
  tags[n - 1] = last;
  for (size_t t = n - 1; t > 0; --t) tags[t - 1] = back[t][tags[t]];
  return tags;
}

double path_score(const Emissions& emissions, const CrfParameters& crf,
                  const std::vector<int>& tags) {
  check_dims(emissions, crf);
  if (tags.size() != emissions.size()) throw DimensionError("path length differs from sequence");
  double s = crf.start[tags[0]] + emissions[0][tags[0]];
  for (size_t t = 1; t < tags.size(); ++t) s += crf.at(tags[t - 1], tags[t]) + emissions[t][tags[t]];
  return s + crf.end[tags.back()];
}

double log_partition(const Emissions& emissions, const CrfParameters& crf) {
  check_dims(emissions, crf);
  Emissions alpha = forward(emissions, crf);
  double z = kNegInf;
  for (int y = 0; y < crf.num_tags; ++y) z = log_add(z, alpha.back()[y] + crf.end[y]);
  return z;
}

Emissions tag_marginals(const Emissions& emissions, const CrfParameters& crf) {
  check_dims(emissions, crf);
  Emissions alpha = forward(emissions, crf), beta = backward(emissions, crf);
  double z = kNegInf;
  for (int y = 0; y < crf.num_tags; ++y) z = log_add(z, alpha.back()[y] + crf.end[y]);
  Emissions m(emissions.size(), std::vector<double>(crf.num_tags, 0.0));
  for (size_t t = 0; t < emissions.size(); ++t) {
    for (int y = 0; y < crf.num_tags; ++y) m[t][y] = std::exp(alpha[t][y] + beta[t][y] - z);
  }
  return m;
}

double crf_nll(const Emissions& emissions, const CrfParameters& crf, const std::vector<int>& gold,
               CrfGradient* grad) {
  check_dims(emissions, crf);
  const int T = crf.num_tags;
  const size_t n = emissions.size();
  Emissions alpha = forward(emissions, crf), beta = backward(emissions, crf);
  double z = kNegInf;
  for (int y = 0; y < T; ++y) z = log_add(z, alpha.back()[y] + crf.end[y]);
  const double nll = z - path_score(emissions, crf, gold);
  if (!grad) return nll;

  grad->emissions.assign(n, std::vector<double>(T, 0.0));
  grad->transition.assign(static_cast<size_t>(T) * T, 0.0);
  grad->start.assign(T, 0.0);
  grad->end.assign(T, 0.0);
  for (size_t t = 0; t < n; ++t) {
    for (int y = 0; y < T; ++y) {
      grad->emissions[t][y] = std::exp(alpha[t][y] + beta[t][y] - z);
    }
    grad->emissions[t][gold[t]] -= 1.0;
  }
  for (int y = 0; y < T; ++y) {
    grad->start[y] = std::exp(alpha[0][y] + beta[0][y] - z);
    grad->end[y] = std::exp(alpha[n - 1][y] + crf.end[y] - z);
  }
  grad->start[gold[0]] -= 1.0;
  grad->end[gold[n - 1]] -= 1.0;
  for (size_t t = 1; t < n; ++t) {
    for (int x = 0; x < T; ++x) {
      if (alpha[t - 1][x] == kNegInf) continue;
      for (int y = 0; y < T; ++y) {
        double s = alpha[t - 1][x] + crf.at(x, y) + emissions[t][y] + beta[t][y] - z;
        if (s != kNegInf) grad->transition[x * T + y] += std::exp(s);
      }
    }
    grad->transition[gold[t - 1] * T + gold[t]] -= 1.0;
  }
  return nll;
}

}  // namespace miner
